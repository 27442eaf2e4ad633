use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMatrix;
use crate::{Error, Result, DEFAULT_TOLERANCE};

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuantumState {
    density: CMatrix,
}

impl QuantumState {
    pub fn new(density: CMatrix) -> Result<Self> {
        Self::with_tolerance(density, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(density: CMatrix, tolerance: f64) -> Result<Self> {
        let herm = density.hermiticity_defect();
        if herm > tolerance {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = density.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tolerance {
            return Err(Error::InvalidState(format!(
                "trace {} differs from 1",
                tr.re
            )));
        }
        let min_eig = density
            .hermitian_eigenvalues()
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -tolerance {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { density })
    }

    /// Skips validation; callers guarantee a valid density matrix.
    pub(crate) fn from_density_unchecked(density: CMatrix) -> Self {
        Self { density }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            density: CMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// `|v><v|` after normalizing `v`.
    pub fn pure(v: &[Complex64]) -> Result<Self> {
        let norm = libm::sqrt(v.iter().map(Complex64::norm_sqr).sum());
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v: Vec<Complex64> = v.iter().map(|x| x / norm).collect();
        Ok(Self {
            density: CMatrix::outer(&v),
        })
    }

    /// The normalized projector `P / tr P`.
    pub fn uniform_on(projector: &CMatrix) -> Result<Self> {
        let rank = projector.trace().re;
        if rank < 0.5 {
            return Err(Error::InvalidState("projector has zero rank".into()));
        }
        Self::new(projector.scale(1.0 / rank))
    }

    /// Random full-rank state `G G^dagger / tr(G G^dagger)` from a complex
    /// Gaussian `G`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let data = (0..dim * dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let g = CMatrix::from_row_major(dim, data).expect("square");
        let rho = &g * &g.adjoint();
        let tr = rho.trace().re;
        Self {
            density: rho.scale(1.0 / tr),
        }
    }

    pub fn dim(&self) -> usize {
        self.density.dim()
    }

    pub fn density(&self) -> &CMatrix {
        &self.density
    }

    /// Born probability `tr[rho P]`, real part.
    pub fn probability(&self, projector: &CMatrix) -> f64 {
        self.density.trace_product(projector).re
    }

    /// `P rho P / tr[rho P]`, or `None` when the outcome has zero weight.
    pub fn collapse(&self, projector: &CMatrix) -> Option<(Self, f64)> {
        let p = self.probability(projector);
        if p <= 0.0 {
            return None;
        }
        let post = &(projector * &self.density) * projector;
        Some((Self::from_density_unchecked(post.scale(1.0 / p)), p))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.density.distance(&other.density)
    }
}
