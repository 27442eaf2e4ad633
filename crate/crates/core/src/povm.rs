//! Projective POVMs on finite-dimensional spaces.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::{column, random_unitary, CMatrix};
use crate::{Error, Result, DEFAULT_TOLERANCE};

/// Ordered projectors `P_1, .., P_M` (label `k` at `projectors()[k - 1]`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProjectivePovm {
    dim: usize,
    projectors: Vec<CMatrix>,
    tolerance: f64,
}

/// Largest violations of the projective-POVM conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PovmReport {
    pub hermiticity: f64,
    /// max_k ||P_k^2 - P_k||
    pub idempotence: f64,
    /// max_{k != l} ||P_k P_l||
    pub orthogonality: f64,
    /// ||sum_k P_k - I||
    pub completeness: f64,
    pub tolerance: f64,
}

impl PovmReport {
    pub fn passed(&self) -> bool {
        self.max_violation() <= self.tolerance
    }

    pub fn max_violation(&self) -> f64 {
        self.hermiticity
            .max(self.idempotence)
            .max(self.orthogonality)
            .max(self.completeness)
    }
}

/// Measures how far `projectors` are from a projective POVM. Fails only on
/// shape problems; numerical violations are reported, not raised.
pub fn validate_projectors(projectors: &[CMatrix], tolerance: f64) -> Result<PovmReport> {
    let Some(first) = projectors.first() else {
        return Err(Error::InvalidPovm("no projectors".into()));
    };
    let dim = first.dim();
    for p in projectors {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
    }
    let mut report = PovmReport {
        hermiticity: 0.0,
        idempotence: 0.0,
        orthogonality: 0.0,
        completeness: 0.0,
        tolerance,
    };
    let mut sum = CMatrix::zeros(dim);
    for (k, p) in projectors.iter().enumerate() {
        report.hermiticity = report.hermiticity.max(p.hermiticity_defect());
        report.idempotence = report.idempotence.max((p * p).distance(p));
        for other in &projectors[k + 1..] {
            report.orthogonality = report.orthogonality.max((p * other).norm());
        }
        sum = &sum + p;
    }
    report.completeness = sum.distance(&CMatrix::identity(dim));
    Ok(report)
}

impl ProjectivePovm {
    /// Validates `projectors` at [`DEFAULT_TOLERANCE`].
    pub fn new(projectors: Vec<CMatrix>) -> Result<Self> {
        Self::with_tolerance(projectors, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(projectors: Vec<CMatrix>, tolerance: f64) -> Result<Self> {
        let report = validate_projectors(&projectors, tolerance)?;
        if !report.passed() {
            return Err(Error::InvalidPovm(format!(
                "violations: hermiticity {:.3e}, idempotence {:.3e}, orthogonality {:.3e}, completeness {:.3e} (tolerance {:.1e})",
                report.hermiticity,
                report.idempotence,
                report.orthogonality,
                report.completeness,
                tolerance
            )));
        }
        Ok(Self {
            dim: projectors[0].dim(),
            projectors,
            tolerance,
        })
    }

    /// Rank-1 projectors onto the standard basis of dimension `dim`.
    pub fn standard_basis(dim: usize) -> Self {
        Self::blocks(&alloc::vec![1; dim]).expect("nonempty ranks")
    }

    /// Diagonal projectors onto consecutive blocks of standard basis vectors
    /// with the given ranks.
    pub fn blocks(ranks: &[usize]) -> Result<Self> {
        check_ranks(ranks)?;
        let dim: usize = ranks.iter().sum();
        let mut start = 0;
        let projectors = ranks
            .iter()
            .map(|&r| {
                let mut diag = alloc::vec![0.0; dim];
                diag[start..start + r].iter_mut().for_each(|x| *x = 1.0);
                start += r;
                CMatrix::from_real_diagonal(&diag)
            })
            .collect();
        Self::new(projectors)
    }

    /// Block projectors with the given ranks conjugated by a random unitary.
    pub fn random<R: Rng + ?Sized>(ranks: &[usize], rng: &mut R) -> Result<Self> {
        check_ranks(ranks)?;
        let dim: usize = ranks.iter().sum();
        let u = random_unitary(dim, rng);
        let mut start = 0;
        let projectors = ranks
            .iter()
            .map(|&r| {
                let mut p = CMatrix::zeros(dim);
                for c in start..start + r {
                    p = &p + &CMatrix::outer(&column(&u, c));
                }
                start += r;
                p
            })
            .collect();
        Self::new(projectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of outcomes `M`.
    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    /// Projector for label `k` (1-based).
    pub fn projector(&self, k: usize) -> Result<&CMatrix> {
        if k == 0 || k > self.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.len(),
            });
        }
        Ok(&self.projectors[k - 1])
    }

    pub fn rank(&self, k: usize) -> Result<usize> {
        Ok(libm::round(self.projector(k)?.trace().re) as usize)
    }

    pub fn validate(&self) -> PovmReport {
        validate_projectors(&self.projectors, self.tolerance)
            .expect("shape checked at construction")
    }

    /// `sum_k coeffs[k] * P_k`.
    pub fn combine(&self, coeffs: &[f64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim);
        for (p, &c) in self.projectors.iter().zip(coeffs) {
            if c != 0.0 {
                out = &out + &p.scale(c);
            }
        }
        out
    }
}

fn check_ranks(ranks: &[usize]) -> Result<()> {
    if ranks.is_empty() || ranks.contains(&0) {
        return Err(Error::InvalidParameter(
            "projector ranks must be a nonempty list of positive integers".into(),
        ));
    }
    Ok(())
}

/// Uniformly random composition of `dim` into `parts` positive ranks.
pub fn random_ranks<R: Rng + ?Sized>(parts: usize, dim: usize, rng: &mut R) -> Result<Vec<usize>> {
    if parts == 0 || parts > dim {
        return Err(Error::InvalidParameter(format!(
            "cannot split dimension {dim} into {parts} nonzero ranks"
        )));
    }
    // choose parts-1 distinct cut points in 1..dim
    let mut cuts: Vec<usize> = (1..dim).collect();
    for i in 0..parts - 1 {
        let j = rng.random_range(i..cuts.len());
        cuts.swap(i, j);
    }
    let mut chosen: Vec<usize> = cuts[..parts - 1].to_vec();
    chosen.sort_unstable();
    let mut ranks = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in chosen.into_iter().chain(core::iter::once(dim)) {
        ranks.push(c - prev);
        prev = c;
    }
    Ok(ranks)
}
