//! Commuting q-observables built from a classical code and a projective POVM.
//!
//! For a code with codewords `x^(1), .., x^(M)` and projectors `P_1, .., P_M`,
//! observable `j` is `Q_j = sum_k x^(k)_j P_k`. Code symbols double as the
//! eigenvalue labels, so the outcome of measuring `Q_j` is directly a code
//! symbol.

use alloc::vec::Vec;

use crate::codes::{ClassicalCode, Decoded};
use crate::linalg::CMatrix;
use crate::povm::ProjectivePovm;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ObservableSet {
    code: ClassicalCode,
    povm: ProjectivePovm,
    observables: Vec<CMatrix>,
    /// `outcome_projectors[j][z]` is the eigenprojector of `Q_{j+1}` for symbol `z`.
    outcome_projectors: Vec<Vec<CMatrix>>,
}

/// Numerical audit of a built observable set.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ObservableReport {
    /// max_{i,j} ||[Q_i, Q_j]||
    pub commutation: f64,
    /// max_j ||prod_{s<q} (Q_j - s I)||; zero iff every spectrum lies in {0,..,q-1}
    pub spectrum_residual: f64,
    pub hermiticity: f64,
    /// max_j ||sum_z P_{j,z} - I||
    pub partition: f64,
    /// max_j max_{z != w} ||P_{j,z} P_{j,w}||
    pub outcome_orthogonality: f64,
    /// 1-based indices of observables whose code column is constant.
    pub uninformative: Vec<usize>,
    pub tolerance: f64,
}

impl ObservableReport {
    pub fn passed(&self) -> bool {
        let scaled = self.tolerance;
        self.commutation <= scaled
            && self.spectrum_residual <= scaled
            && self.hermiticity <= scaled
            && self.partition <= scaled
            && self.outcome_orthogonality <= scaled
    }
}

/// Deviation of `prod_j P_{j, x^(k)_j}` from `P_k`, per codeword.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConsistencyReport {
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

impl ObservableSet {
    pub fn build(code: ClassicalCode, povm: ProjectivePovm) -> Result<Self> {
        if code.size() != povm.len() {
            return Err(Error::CardinalityMismatch {
                codewords: code.size(),
                projectors: povm.len(),
            });
        }
        let n = code.length();
        let q = code.q();
        let mut observables = Vec::with_capacity(n);
        let mut outcome_projectors = Vec::with_capacity(n);
        for j in 0..n {
            let coeffs: Vec<f64> = code.codewords().iter().map(|w| w[j] as f64).collect();
            observables.push(povm.combine(&coeffs));
            let per_symbol = (0..q)
                .map(|z| {
                    let indicator: Vec<f64> = code
                        .codewords()
                        .iter()
                        .map(|w| if w[j] as usize == z { 1.0 } else { 0.0 })
                        .collect();
                    povm.combine(&indicator)
                })
                .collect();
            outcome_projectors.push(per_symbol);
        }
        Ok(Self {
            code,
            povm,
            observables,
            outcome_projectors,
        })
    }

    pub fn code(&self) -> &ClassicalCode {
        &self.code
    }

    pub fn povm(&self) -> &ProjectivePovm {
        &self.povm
    }

    pub fn dim(&self) -> usize {
        self.povm.dim()
    }

    /// Number of observables `n`.
    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn observables(&self) -> &[CMatrix] {
        &self.observables
    }

    fn check_j(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.len(),
            });
        }
        Ok(j - 1)
    }

    /// `Q_j` for 1-based `j`.
    pub fn observable(&self, j: usize) -> Result<&CMatrix> {
        Ok(&self.observables[self.check_j(j)?])
    }

    /// Coefficient of `P_k` in `Q_j`, for `k = 1..=M`.
    pub fn coefficients(&self, j: usize) -> Result<Vec<u8>> {
        let j = self.check_j(j)?;
        Ok(self.code.codewords().iter().map(|w| w[j]).collect())
    }

    /// Labels `k` with `x^(k)_j = z`.
    pub fn outcome_support(&self, j: usize, z: u8) -> Result<Vec<usize>> {
        let j0 = self.check_j(j)?;
        self.check_symbol(z)?;
        Ok(self
            .code
            .codewords()
            .iter()
            .enumerate()
            .filter(|(_, w)| w[j0] == z)
            .map(|(k, _)| k + 1)
            .collect())
    }

    /// `P_{j,z} = sum_{k : x^(k)_j = z} P_k`.
    pub fn outcome_projector(&self, j: usize, z: u8) -> Result<&CMatrix> {
        let j0 = self.check_j(j)?;
        self.check_symbol(z)?;
        Ok(&self.outcome_projectors[j0][z as usize])
    }

    fn check_symbol(&self, z: u8) -> Result<()> {
        if z as usize >= self.code.q() {
            return Err(Error::SymbolOutOfRange {
                symbol: z as usize,
                q: self.code.q(),
            });
        }
        Ok(())
    }

    /// Labels still possible after observing `(j, z)` pairs, i.e. the
    /// support of `prod P_{j,z}` in terms of the `P_k`.
    pub fn support_after(&self, outcomes: &[(usize, u8)]) -> Result<Vec<usize>> {
        for &(j, z) in outcomes {
            self.check_j(j)?;
            self.check_symbol(z)?;
        }
        Ok(self
            .code
            .codewords()
            .iter()
            .enumerate()
            .filter(|(_, w)| outcomes.iter().all(|&(j, z)| w[j - 1] == z))
            .map(|(k, _)| k + 1)
            .collect())
    }

    /// Ordered product `P_{j1,z1} P_{j2,z2} ...`.
    pub fn outcome_product(&self, outcomes: &[(usize, u8)]) -> Result<CMatrix> {
        let mut acc = CMatrix::identity(self.dim());
        for &(j, z) in outcomes {
            acc = &acc * self.outcome_projector(j, z)?;
        }
        Ok(acc)
    }

    /// The classical post-processing map from outcome words to labels.
    pub fn decode(&self, y: &[u8]) -> Result<Decoded> {
        self.code.decode_nearest(y)
    }

    /// Checks `prod_j P_{j, x^(k)_j} = P_k` for every codeword.
    pub fn check_consistency(&self) -> ConsistencyReport {
        let deviations: Vec<f64> = self
            .code
            .codewords()
            .iter()
            .zip(self.povm.projectors())
            .map(|(w, pk)| {
                let outcomes: Vec<(usize, u8)> =
                    w.iter().enumerate().map(|(j, &z)| (j + 1, z)).collect();
                let prod = self
                    .outcome_product(&outcomes)
                    .expect("codeword symbols in range");
                prod.distance(pk)
            })
            .collect();
        let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
        ConsistencyReport {
            deviations,
            max_deviation,
            tolerance: self.povm.tolerance(),
        }
    }

    pub fn validate(&self) -> ObservableReport {
        let dim = self.dim();
        let q = self.code.q();
        let id = CMatrix::identity(dim);
        let mut report = ObservableReport {
            commutation: 0.0,
            spectrum_residual: 0.0,
            hermiticity: 0.0,
            partition: 0.0,
            outcome_orthogonality: 0.0,
            uninformative: Vec::new(),
            tolerance: self.povm.tolerance() * dim as f64,
        };
        for (i, qi) in self.observables.iter().enumerate() {
            report.hermiticity = report.hermiticity.max(qi.hermiticity_defect());
            for qj in &self.observables[i + 1..] {
                report.commutation = report.commutation.max(qi.commutator(qj).norm());
            }
            let mut poly = CMatrix::identity(dim);
            for s in 0..q {
                poly = &poly * &(qi - &id.scale(s as f64));
            }
            report.spectrum_residual = report.spectrum_residual.max(poly.norm());

            let projs = &self.outcome_projectors[i];
            let mut sum = CMatrix::zeros(dim);
            for (z, p) in projs.iter().enumerate() {
                sum = &sum + p;
                for other in &projs[z + 1..] {
                    report.outcome_orthogonality =
                        report.outcome_orthogonality.max((p * other).norm());
                }
            }
            report.partition = report.partition.max(sum.distance(&id));

            let first = self.code.codewords()[0][i];
            if self.code.codewords().iter().all(|w| w[i] == first) {
                report.uninformative.push(i + 1);
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use alloc::vec;

    fn c6_set() -> ObservableSet {
        ObservableSet::build(
            ClassicalCode::shortened_hamming_6(),
            ProjectivePovm::standard_basis(8),
        )
        .unwrap()
    }

    fn labels_with_coefficient_one(set: &ObservableSet, j: usize) -> Vec<usize> {
        set.coefficients(j)
            .unwrap()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(k, _)| k + 1)
            .collect()
    }

    #[test]
    fn c6_observables_match_listed_sums() {
        let set = c6_set();
        assert_eq!(labels_with_coefficient_one(&set, 1), [2, 5, 6, 8]);
        assert_eq!(labels_with_coefficient_one(&set, 4), [3, 4, 5, 6]);
        let povm = set.povm();
        let expected = povm.combine(&[0., 1., 0., 0., 1., 1., 0., 1.]);
        assert!(set.observable(1).unwrap().distance(&expected) < 1e-15);
    }

    #[test]
    fn outcome_projectors() {
        let set = c6_set();
        assert_eq!(set.outcome_support(1, 0).unwrap(), [1, 3, 4, 7]);
        assert_eq!(set.outcome_support(2, 1).unwrap(), [3, 5, 7, 8]);
        let p = set.outcome_projector(1, 0).unwrap();
        let expected = set.povm().combine(&[1., 0., 1., 1., 0., 0., 1., 0.]);
        assert!(p.distance(&expected) < 1e-15);
        assert!(set.outcome_projector(0, 0).is_err());
        assert!(set.outcome_projector(7, 0).is_err());
        assert!(matches!(
            set.outcome_projector(1, 2),
            Err(Error::SymbolOutOfRange { .. })
        ));
    }

    #[test]
    fn partial_outcomes_isolate_x7() {
        let set = c6_set();
        assert_eq!(set.support_after(&[(1, 0)]).unwrap(), [1, 3, 4, 7]);
        assert_eq!(set.support_after(&[(1, 0), (2, 1)]).unwrap(), [3, 7]);
        assert_eq!(set.support_after(&[(1, 0), (2, 1), (3, 1)]).unwrap(), [7]);
        let prod = set.outcome_product(&[(1, 0), (2, 1), (3, 1)]).unwrap();
        assert!(prod.distance(set.povm().projector(7).unwrap()) < 1e-12);
    }

    #[test]
    fn cardinality_mismatch() {
        let err = ObservableSet::build(
            ClassicalCode::shortened_hamming_6(),
            ProjectivePovm::standard_basis(7),
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::CardinalityMismatch {
                codewords: 8,
                projectors: 7
            }
        );
    }

    #[test]
    fn zero_column_gives_zero_observable() {
        let code = ClassicalCode::new(2, vec![vec![0, 0], vec![0, 1]]).unwrap();
        let set = ObservableSet::build(code, ProjectivePovm::standard_basis(2)).unwrap();
        assert_eq!(set.observable(1).unwrap().norm(), 0.0);
        let report = set.validate();
        assert_eq!(report.uninformative, [1]);
        assert!(report.passed());
    }

    #[test]
    fn consistency_standard_and_random() {
        let set = c6_set();
        let report = set.check_consistency();
        assert!(report.passed());
        assert!(report.max_deviation <= 1e-9);
        assert!(set.validate().passed());

        let mut rng = seeded(77);
        let ranks = crate::povm::random_ranks(8, 12, &mut rng).unwrap();
        let povm = ProjectivePovm::random(&ranks, &mut rng).unwrap();
        let set = ObservableSet::build(ClassicalCode::shortened_hamming_6(), povm).unwrap();
        assert!(set.check_consistency().passed());
        assert!(set.validate().passed());
    }

    #[test]
    fn ternary_spectrum() {
        let code = ClassicalCode::repetition(3, 1).unwrap();
        let set = ObservableSet::build(code, ProjectivePovm::blocks(&[1, 2, 1]).unwrap()).unwrap();
        let report = set.validate();
        assert!(report.passed(), "{report:?}");
        let eig = set.observable(2).unwrap().hermitian_eigenvalues();
        for (a, b) in eig.iter().zip([0.0, 1.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
