//! Coherent-state readout of a q-observable.
//!
//! A dispersive coupling `gamma * Q_j (x) n_j` applied for time
//! `theta = 2 pi / (q gamma)` rotates an ancilla coherent state `|alpha>` to
//! `|e^{-i 2 pi z / q} alpha>` when the system sits in the eigenspace of
//! `Q_j` with eigenvalue `z`. Homodyne detection of both quadratures then
//! discriminates the `q` equiangular rotations.
//!
//! Quadrature convention: `x = (a + a^dagger) / sqrt 2`, so a coherent state
//! `|beta>` yields `x ~ N(sqrt 2 Re beta, 1/2)` and `p ~ N(sqrt 2 Im beta, 1/2)`.
//! Both quadratures are sampled independently; the extra vacuum noise of a
//! simultaneous heterodyne measurement is not modeled.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::rng::stream_rng;
use crate::{Error, Result};

/// Standard deviation of each homodyne quadrature for a coherent state.
pub const QUADRATURE_STD: f64 = FRAC_1_SQRT_2;

/// `2 pi |alpha|^2 <= WEAK_SIGNAL_FACTOR * q` raises the advisory flag.
pub const WEAK_SIGNAL_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "ReadoutParams"))]
pub struct ReadoutConfig {
    q: usize,
    alpha: Complex64,
    gamma: f64,
    theta: f64,
}

/// Deserialized form of [`ReadoutConfig`]; the interaction angle is derived.
#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct ReadoutParams {
    q: usize,
    alpha: Complex64,
    #[serde(default = "unit_gamma")]
    gamma: f64,
}

#[cfg(feature = "serde")]
fn unit_gamma() -> f64 {
    1.0
}

#[cfg(feature = "serde")]
impl TryFrom<ReadoutParams> for ReadoutConfig {
    type Error = Error;

    fn try_from(p: ReadoutParams) -> Result<Self> {
        Self::new(p.q, p.alpha, p.gamma)
    }
}

/// One homodyne record `(x, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Quadratures {
    pub x: f64,
    pub p: f64,
}

impl ReadoutConfig {
    /// Interaction time is fixed to `2 pi / (q gamma)`.
    pub fn new(q: usize, alpha: Complex64, gamma: f64) -> Result<Self> {
        if !(2..=crate::codes::MAX_ALPHABET).contains(&q) {
            return Err(Error::InvalidParameter(alloc::format!("outcome count {q}")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "coupling rate {gamma}"
            )));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        Ok(Self {
            q,
            alpha,
            gamma,
            theta: 2.0 * PI / (q as f64 * gamma),
        })
    }

    /// Unit coupling rate.
    pub fn with_amplitude(q: usize, alpha: Complex64) -> Result<Self> {
        Self::new(q, alpha, 1.0)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Set when `2 pi |alpha|^2` is not comfortably above `q`.
    pub fn weak_signal(&self) -> bool {
        2.0 * PI * self.alpha.norm_sqr() <= WEAK_SIGNAL_FACTOR * self.q as f64
    }

    fn check_symbol(&self, z: u8) -> Result<()> {
        if z as usize >= self.q {
            return Err(Error::SymbolOutOfRange {
                symbol: z as usize,
                q: self.q,
            });
        }
        Ok(())
    }

    /// `e^{-i theta gamma z} alpha`.
    pub fn rotated_amplitude(&self, z: u8) -> Result<Complex64> {
        self.check_symbol(z)?;
        Ok(rotate(self.alpha, self.theta * self.gamma * z as f64))
    }

    /// Expected `(x, p)` for eigenvalue `z`.
    pub fn quadrature_mean(&self, z: u8) -> Result<Quadratures> {
        let beta = self.rotated_amplitude(z)?;
        Ok(Quadratures {
            x: SQRT_2 * beta.re,
            p: SQRT_2 * beta.im,
        })
    }

    pub fn sample_quadratures<R: Rng + ?Sized>(&self, z: u8, rng: &mut R) -> Result<Quadratures> {
        let mean = self.quadrature_mean(z)?;
        let nx: f64 = rng.sample(StandardNormal);
        let np: f64 = rng.sample(StandardNormal);
        Ok(Quadratures {
            x: mean.x + QUADRATURE_STD * nx,
            p: mean.p + QUADRATURE_STD * np,
        })
    }

    /// Nearest rotated mean in the quadrature plane; ties go to the smaller
    /// symbol.
    pub fn classify_outcome(&self, sample: Quadratures) -> Result<u8> {
        if self.alpha.norm_sqr() == 0.0 {
            return Err(Error::IndeterminateClassification);
        }
        let mut best = (f64::INFINITY, 0u8);
        for z in 0..self.q {
            let m = self.quadrature_mean(z as u8)?;
            let d = (sample.x - m.x) * (sample.x - m.x) + (sample.p - m.p) * (sample.p - m.p);
            if d < best.0 {
                best = (d, z as u8);
            }
        }
        Ok(best.1)
    }

    /// Samples and classifies one readout of eigenvalue `z`.
    pub fn read<R: Rng + ?Sized>(&self, z: u8, rng: &mut R) -> Result<u8> {
        let s = self.sample_quadratures(z, rng)?;
        self.classify_outcome(s)
    }

    /// Monte-Carlo misclassification rate, `trials` readouts per symbol.
    /// Symbol `z` draws from stream `z` of `seed`.
    pub fn estimate_misclassification(&self, trials: u64, seed: u64) -> Result<Misclassification> {
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.alpha.norm_sqr() == 0.0 {
            return Err(Error::IndeterminateClassification);
        }
        let mut per_symbol = Vec::with_capacity(self.q);
        let mut errors_total = 0u64;
        for z in 0..self.q {
            let mut rng = stream_rng(seed, z as u64);
            let errors = (0..trials)
                .filter(|_| self.read(z as u8, &mut rng).expect("symbol in range") != z as u8)
                .count() as u64;
            errors_total += errors;
            per_symbol.push(errors as f64 / trials as f64);
        }
        let total = trials * self.q as u64;
        let average = errors_total as f64 / total as f64;
        Ok(Misclassification {
            per_symbol,
            average,
            standard_error: libm::sqrt(average * (1.0 - average) / total as f64),
            trials_per_symbol: trials,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Misclassification {
    pub per_symbol: Vec<f64>,
    pub average: f64,
    pub standard_error: f64,
    pub trials_per_symbol: u64,
}

fn rotate(z: Complex64, angle: f64) -> Complex64 {
    z * Complex64::new(libm::cos(angle), -libm::sin(angle))
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Closed-form binary error rate for real `alpha`: the means sit
/// `2 sqrt 2 |alpha|` apart with standard deviation `1/sqrt 2`, so an error
/// needs a `2 |alpha|`-sigma excursion.
pub fn binary_error_rate(alpha_abs: f64) -> f64 {
    normal_cdf(-2.0 * alpha_abs)
}
