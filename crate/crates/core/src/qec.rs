//! Counting-level planning of robust syndrome extraction.
//!
//! A recovery for a QEC code correcting the error set `K` starts with a
//! projective measurement `Pi'`. Its outcome count is at most `|K| + 1`
//! (one extra projector for the uncorrectable space), and at most `|K|` when
//! the correctable spaces already exhaust the Hilbert space. The planner
//! turns that outcome count into the number of q-ary observables needed to
//! survive `t` outcome errors.

use alloc::format;

use num_traits::ToPrimitive;

use crate::combinatorics::{
    ball_volume, min_length_for_radius, q_ary_entropy, Bounded, Convention, LengthCertificate,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "snake_case"))]
pub enum QecParams {
    /// A p-ary code on `m` qudits correcting `k` arbitrary errors.
    QuditDistance { p: usize, m: usize, k: usize },
    /// Binomial bosonic code correcting `g0` losses, `g1` gains and `k`
    /// dephasing errors.
    Binomial { g0: usize, g1: usize, k: usize },
    /// A known outcome count `|Pi'|`.
    ExplicitPovmSize { size: u64 },
}

impl QecParams {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::QuditDistance { p, m, k } => {
                if p < 2 || m == 0 || k > m {
                    return Err(Error::InvalidParameter(format!(
                        "qudit code needs p >= 2, m >= 1, k <= m (got p={p}, m={m}, k={k})"
                    )));
                }
            }
            Self::Binomial { .. } => {}
            Self::ExplicitPovmSize { size } => {
                if size == 0 {
                    return Err(Error::InvalidParameter("POVM size must be positive".into()));
                }
            }
        }
        Ok(())
    }

    /// Gap `g = g0 + g1 + 1` of a binomial code.
    pub fn binomial_gap(&self) -> Option<usize> {
        match *self {
            Self::Binomial { g0, g1, .. } => Some(g0 + g1 + 1),
            _ => None,
        }
    }

    /// `N = max(g0, g1, 2k)` of a binomial code.
    pub fn binomial_order(&self) -> Option<usize> {
        match *self {
            Self::Binomial { g0, g1, k } => Some(g0.max(g1).max(2 * k)),
            _ => None,
        }
    }
}

/// `|K|`: `V_{p^2, m}(k)` for qudit codes (Paulis of weight at most `k`),
/// `g0 + g1 + k + 1` for binomial codes.
pub fn correctible_set_size(params: &QecParams) -> Result<u64> {
    params.validate()?;
    match *params {
        QecParams::QuditDistance { p, m, k } => ball_volume(p * p, m, k)?
            .to_u64()
            .ok_or_else(|| Error::InvalidParameter("correctable set size overflows u64".into())),
        QecParams::Binomial { g0, g1, k } => Ok((g0 + g1 + k + 1) as u64),
        QecParams::ExplicitPovmSize { .. } => Err(Error::NotApplicable),
    }
}

/// The two outcome-count bounds for `Pi'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PovmSizeBound {
    /// `|K| + 1`: correctable spaces plus one uncorrectable space.
    pub with_uncorrectable: u64,
    /// `|K|`: correctable spaces only.
    pub correctable_only: u64,
}

impl PovmSizeBound {
    /// The larger bound, used for planning.
    pub fn planning(&self) -> u64 {
        self.with_uncorrectable.max(self.correctable_only)
    }
}

pub fn povm_size_bound(params: &QecParams) -> Result<PovmSizeBound> {
    if let QecParams::ExplicitPovmSize { size } = *params {
        params.validate()?;
        return Ok(PovmSizeBound {
            with_uncorrectable: size,
            correctable_only: size,
        });
    }
    let k = correctible_set_size(params)?;
    Ok(PovmSizeBound {
        with_uncorrectable: k + 1,
        correctable_only: k,
    })
}

/// Which distance conventions a plan should compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConventionChoice {
    Strict,
    Even,
    Both,
}

impl ConventionChoice {
    pub fn includes(self, c: Convention) -> bool {
        matches!(
            (self, c),
            (Self::Both, _) | (Self::Strict, Convention::Strict) | (Self::Even, Convention::Even)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SyndromePlan {
    pub params: QecParams,
    /// `None` for explicit POVM sizes.
    pub correctible_set_size: Option<u64>,
    pub povm_size: PovmSizeBound,
    /// Outcome count the observables must distinguish.
    pub outcomes: u64,
    pub t: usize,
    pub q: usize,
    pub strict: Option<LengthCertificate>,
    pub even: Option<LengthCertificate>,
    /// `ceil(log_q M)` observables without redundancy.
    pub unprotected_observables: u64,
    /// Each unprotected observable repeated `2t + 1` times.
    pub repetition_baseline: u64,
}

impl SyndromePlan {
    pub fn length(&self, convention: Convention) -> Option<&LengthCertificate> {
        match convention {
            Convention::Strict => self.strict.as_ref(),
            Convention::Even => self.even.as_ref(),
        }
    }
}

/// `ceil(log_q m)` computed in integers.
pub fn unprotected_length(q: usize, m: u64) -> u64 {
    let mut n = 0;
    let mut reach: u128 = 1;
    while reach < m as u128 {
        reach *= q as u128;
        n += 1;
    }
    n
}

pub fn plan_syndrome_extraction(
    params: &QecParams,
    t: usize,
    q: usize,
    conventions: ConventionChoice,
    budget: u64,
) -> Result<SyndromePlan> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!(
            "observable arity {q} below 2"
        )));
    }
    let povm_size = povm_size_bound(params)?;
    let correctible = match params {
        QecParams::ExplicitPovmSize { .. } => None,
        _ => Some(correctible_set_size(params)?),
    };
    let outcomes = povm_size.planning();
    let length = |c: Convention| -> Result<Option<LengthCertificate>> {
        if !conventions.includes(c) || outcomes < 2 {
            return Ok(None);
        }
        min_length_for_radius(q, outcomes, t, c, budget).map(Some)
    };
    let unprotected = unprotected_length(q, outcomes);
    Ok(SyndromePlan {
        params: *params,
        correctible_set_size: correctible,
        povm_size,
        outcomes,
        t,
        q,
        strict: length(Convention::Strict)?,
        even: length(Convention::Even)?,
        unprotected_observables: unprotected,
        repetition_baseline: unprotected * (2 * t as u64 + 1),
    })
}

/// Reconstructed asymptotic estimates for the number of q-ary observables
/// protecting syndrome extraction of a p-ary `m`-qudit code correcting `k`
/// errors, with an outcome-error fraction `epsilon_frac`:
///
/// lower = m H_{p^2}(k/m) log_q(p^2) / (1 - H_q(e)),
/// upper = m H_{p^2}(2k/m) log_q(p^2) / (1 - H_q(2e)).
///
/// This substitutes `log_q |K| ~ m H_{p^2}(k/m) log_q(p^2)` into the
/// length estimates of [`crate::combinatorics::asymptotic_length_bounds`].
pub fn syndrome_asymptotic_bounds(
    p: usize,
    m: usize,
    k: usize,
    epsilon_frac: f64,
    q: usize,
) -> Result<(f64, f64)> {
    if p < 2 || q < 2 || m == 0 {
        return Err(Error::InvalidParameter(format!("p={p}, q={q}, m={m}")));
    }
    let alphabet = p * p;
    let rate = k as f64 / m as f64;
    let monotone_limit = (alphabet - 1) as f64 / alphabet as f64;
    if 2.0 * rate > monotone_limit {
        return Err(Error::Domain(format!(
            "2k/m = {} leaves the increasing range of H_{alphabet}",
            2.0 * rate
        )));
    }
    let limit = (q - 1) as f64 / q as f64;
    if !(epsilon_frac >= 0.0 && 2.0 * epsilon_frac < limit) {
        return Err(Error::Domain(format!(
            "error fraction {epsilon_frac} needs 0 <= 2e < {limit}"
        )));
    }
    let scale = m as f64 * libm::log(alphabet as f64) / libm::log(q as f64);
    let lower = scale * q_ary_entropy(alphabet, rate)? / (1.0 - q_ary_entropy(q, epsilon_frac)?);
    let upper = scale * q_ary_entropy(alphabet, 2.0 * rate)?
        / (1.0 - q_ary_entropy(q, 2.0 * epsilon_frac)?);
    Ok((lower, upper))
}

/// Convenience: the exact planned length under a convention, if settled.
pub fn planned_length(plan: &SyndromePlan, convention: Convention) -> Option<Bounded> {
    plan.length(convention).map(|c| c.result)
}
