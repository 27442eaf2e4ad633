//! Born-rule simulation of the projective measurement and of the sequential
//! observable measurement, with errors injected on the classical outcomes.
//!
//! Errors only ever touch the recorded outcome word after the full clean word
//! has been produced; the post-measurement state is never corrupted here.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::codes::{ClassicalCode, Decoded};
use crate::linalg::CMatrix;
use crate::observables::ObservableSet;
use crate::povm::ProjectivePovm;
use crate::readout::ReadoutConfig;
use crate::rng::stream_rng;
use crate::state::QuantumState;
use crate::{Error, Result};

/// Negative Born weights down to `-PROBABILITY_FLOOR` are clipped to zero;
/// anything below is a validation failure.
pub const PROBABILITY_FLOOR: f64 = 1e-9;

/// Tolerance for `tau = rho_k` in audits.
pub const STATE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum NoiseModel {
    Noiseless,
    /// At most `t` corrupted symbols. With explicit 1-based `positions` those
    /// exact positions are corrupted; otherwise `t` distinct positions are
    /// drawn uniformly.
    Adversarial {
        t: usize,
        #[cfg_attr(feature = "serde", serde(default))]
        positions: Option<Vec<usize>>,
    },
    /// Each symbol is replaced with probability `p` by a uniformly chosen
    /// different symbol.
    Independent {
        p: f64,
    },
    /// Each symbol is read out through the coherent-state homodyne scheme.
    Homodyne {
        readout: ReadoutConfig,
    },
}

impl NoiseModel {
    pub fn validate(&self, q: usize, n: usize) -> Result<()> {
        match self {
            Self::Noiseless => Ok(()),
            Self::Adversarial { t, positions } => {
                if let Some(pos) = positions {
                    if pos.len() > *t {
                        return Err(Error::InvalidParameter(format!(
                            "{} positions requested with t = {t}",
                            pos.len()
                        )));
                    }
                    let mut seen = vec![false; n];
                    for &p in pos {
                        if p == 0 || p > n {
                            return Err(Error::IndexOutOfRange { index: p, len: n });
                        }
                        if core::mem::replace(&mut seen[p - 1], true) {
                            return Err(Error::InvalidParameter(format!(
                                "position {p} listed twice"
                            )));
                        }
                    }
                }
                Ok(())
            }
            Self::Independent { p } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::InvalidParameter(format!("flip probability {p}")));
                }
                Ok(())
            }
            Self::Homodyne { readout } => {
                if readout.q() != q {
                    return Err(Error::InvalidParameter(format!(
                        "readout distinguishes {} symbols but the code is {q}-ary",
                        readout.q()
                    )));
                }
                if readout.alpha().norm_sqr() == 0.0 {
                    return Err(Error::IndeterminateClassification);
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Corruption {
    pub word: Vec<u8>,
    /// 1-based positions where `word` differs from the input, ascending.
    pub positions: Vec<usize>,
}

/// Replaces the symbol at `pos` by a uniformly chosen different one.
fn corrupt_symbol<R: Rng + ?Sized>(s: u8, q: usize, rng: &mut R) -> u8 {
    if q == 2 {
        return 1 - s;
    }
    let r = rng.random_range(0..q - 1) as u8;
    if r >= s {
        r + 1
    } else {
        r
    }
}

/// Applies `model` to the clean word `z`.
pub fn inject_symbol_errors<R: Rng + ?Sized>(
    z: &[u8],
    q: usize,
    model: &NoiseModel,
    rng: &mut R,
) -> Result<Corruption> {
    if let Some(&s) = z.iter().find(|&&s| s as usize >= q) {
        return Err(Error::SymbolOutOfRange {
            symbol: s as usize,
            q,
        });
    }
    model.validate(q, z.len())?;
    let mut word = z.to_vec();
    match model {
        NoiseModel::Noiseless => {}
        NoiseModel::Adversarial { t, positions } => {
            let chosen: Vec<usize> = match positions {
                Some(p) => p.clone(),
                None => {
                    let n = z.len();
                    let mut all: Vec<usize> = (1..=n).collect();
                    let take = (*t).min(n);
                    for i in 0..take {
                        let j = rng.random_range(i..n);
                        all.swap(i, j);
                    }
                    all.truncate(take);
                    all
                }
            };
            for p in chosen {
                word[p - 1] = corrupt_symbol(word[p - 1], q, rng);
            }
        }
        NoiseModel::Independent { p } => {
            for s in word.iter_mut() {
                if rng.random::<f64>() < *p {
                    *s = corrupt_symbol(*s, q, rng);
                }
            }
        }
        NoiseModel::Homodyne { readout } => {
            for s in word.iter_mut() {
                *s = readout.read(*s, rng)?;
            }
        }
    }
    let positions = z
        .iter()
        .zip(&word)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| i + 1)
        .collect();
    Ok(Corruption { word, positions })
}

/// Born weights `tr[rho P]` with small negatives clipped.
fn born_weights(state: &QuantumState, projectors: &[&CMatrix]) -> Result<Vec<f64>> {
    projectors
        .iter()
        .map(|p| {
            let w = state.probability(p);
            if w < -PROBABILITY_FLOOR {
                Err(Error::InvalidState(format!("negative Born weight {w:.3e}")))
            } else {
                Ok(w.max(0.0))
            }
        })
        .collect()
}

fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<usize> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidState("all outcomes have zero weight".into()));
    }
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last = i;
            acc += w;
            if u < acc {
                return Ok(i);
            }
        }
    }
    Ok(last)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveOutcome {
    /// 1-based label.
    pub index: usize,
    pub post_state: QuantumState,
    pub probability: f64,
}

/// One Born-rule draw from the projective measurement.
pub fn measure_projective<R: Rng + ?Sized>(
    state: &QuantumState,
    povm: &ProjectivePovm,
    rng: &mut R,
) -> Result<ProjectiveOutcome> {
    check_dims(state, povm.dim())?;
    let projectors: Vec<&CMatrix> = povm.projectors().iter().collect();
    let weights = born_weights(state, &projectors)?;
    let k = sample_index(&weights, rng)?;
    let (post_state, _) = state
        .collapse(projectors[k])
        .ok_or_else(|| Error::InvalidState("sampled a zero-weight outcome".into()))?;
    let total: f64 = weights.iter().sum();
    Ok(ProjectiveOutcome {
        index: k + 1,
        post_state,
        probability: weights[k] / total,
    })
}

fn check_dims(state: &QuantumState, dim: usize) -> Result<()> {
    if state.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: state.dim(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceOutcome {
    /// Outcome word indexed by observable (position `j - 1` holds `z_j`),
    /// whatever the measurement order.
    pub word: Vec<u8>,
    pub post_state: QuantumState,
    /// Probability of each drawn symbol, in measurement order.
    pub step_probabilities: Vec<f64>,
    pub order: Vec<usize>,
}

fn natural_order(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

fn check_order(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: order.len(),
        });
    }
    for &j in order {
        if j == 0 || j > n || core::mem::replace(&mut seen[j - 1], true) {
            return Err(Error::InvalidParameter(format!(
                "measurement order must be a permutation of 1..={n}"
            )));
        }
    }
    Ok(())
}

/// Measures `Q_j` for each `j` in `order` (default `1..=n`), collapsing the
/// state after every outcome.
pub fn measure_observable_sequence<R: Rng + ?Sized>(
    state: &QuantumState,
    set: &ObservableSet,
    order: Option<&[usize]>,
    rng: &mut R,
) -> Result<SequenceOutcome> {
    check_dims(state, set.dim())?;
    let n = set.len();
    let order = match order {
        Some(o) => {
            check_order(o, n)?;
            o.to_vec()
        }
        None => natural_order(n),
    };
    let q = set.code().q();
    let mut current = state.clone();
    let mut word = vec![0u8; n];
    let mut step_probabilities = Vec::with_capacity(n);
    for &j in &order {
        let projectors: Vec<&CMatrix> = (0..q)
            .map(|z| set.outcome_projector(j, z as u8))
            .collect::<Result<_>>()?;
        let weights = born_weights(&current, &projectors)?;
        let z = sample_index(&weights, rng)?;
        let total: f64 = weights.iter().sum();
        step_probabilities.push(weights[z] / total);
        let (next, _) = current
            .collapse(projectors[z])
            .ok_or_else(|| Error::InvalidState("sampled a zero-weight outcome".into()))?;
        current = next;
        word[j - 1] = z as u8;
    }
    Ok(SequenceOutcome {
        word,
        post_state: current,
        step_probabilities,
        order,
    })
}

/// Full record of one robust-measurement trial.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementTranscript {
    /// Label of the clean word; always defined since the clean word is a
    /// codeword.
    pub true_index: usize,
    pub clean_word: Vec<u8>,
    pub corrupted_word: Vec<u8>,
    pub error_positions: Vec<usize>,
    pub decoded: Decoded,
    pub post_state: QuantumState,
    pub step_probabilities: Vec<f64>,
    /// `||tau - rho_{D(y)}||`, or `None` when `D(y)` has zero Born weight.
    pub state_deviation: Option<f64>,
    /// At most `t(C)` symbols were corrupted.
    pub within_guarantee: bool,
}

impl MeasurementTranscript {
    pub fn decoded_correctly(&self) -> bool {
        self.decoded.index == self.true_index
    }

    /// Whether `tau = rho_{D(y)}` holds within [`STATE_TOLERANCE`].
    pub fn state_matches(&self) -> bool {
        self.state_deviation.is_some_and(|d| d <= STATE_TOLERANCE)
    }

    /// The decoded label is right and the post-measurement state matches it.
    pub fn success(&self) -> bool {
        self.decoded_correctly() && self.state_matches()
    }
}

fn correction_radius(code: &ClassicalCode) -> usize {
    code.error_radius().unwrap_or(code.length())
}

/// Sequential measurement, error injection and decoding, with the
/// post-measurement state compared against `rho_{D(y)}`.
pub fn robust_measurement_trial<R: Rng + ?Sized>(
    state: &QuantumState,
    set: &ObservableSet,
    model: &NoiseModel,
    rng: &mut R,
) -> Result<MeasurementTranscript> {
    let code = set.code();
    model.validate(code.q(), code.length())?;
    let seq = measure_observable_sequence(state, set, None, rng)?;
    let true_index = code.index_of(&seq.word).ok_or_else(|| {
        Error::InvalidPovm("clean outcome word is not a codeword; POVM is not projective".into())
    })?;
    let corruption = inject_symbol_errors(&seq.word, code.q(), model, rng)?;
    let decoded = code.decode_nearest(&corruption.word)?;
    let target = set.povm().projector(decoded.index)?;
    let state_deviation = state
        .collapse(target)
        .map(|(rho_k, _)| seq.post_state.distance(&rho_k));
    Ok(MeasurementTranscript {
        true_index,
        within_guarantee: corruption.positions.len() <= correction_radius(code),
        clean_word: seq.word,
        corrupted_word: corruption.word,
        error_positions: corruption.positions,
        decoded,
        post_state: seq.post_state,
        step_probabilities: seq.step_probabilities,
        state_deviation,
    })
}

/// Exhaustive audit of the correction guarantee for one input state.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GuaranteeReport {
    pub radius: usize,
    /// (codeword, corruption) pairs examined.
    pub cases: usize,
    pub decode_failures: usize,
    pub max_state_deviation: f64,
    /// Codewords skipped because their Born weight vanishes.
    pub skipped_codewords: Vec<usize>,
}

impl GuaranteeReport {
    pub fn passed(&self) -> bool {
        self.decode_failures == 0 && self.max_state_deviation <= STATE_TOLERANCE
    }
}

/// Every word obtained from `z` by changing at most `radius` symbols.
pub fn corruptions_within(z: &[u8], q: usize, radius: usize) -> Vec<Vec<u8>> {
    fn rec(word: &mut Vec<u8>, start: usize, left: usize, q: usize, out: &mut Vec<Vec<u8>>) {
        out.push(word.clone());
        if left == 0 {
            return;
        }
        for i in start..word.len() {
            let orig = word[i];
            for s in 0..q as u8 {
                if s != orig {
                    word[i] = s;
                    rec(word, i + 1, left - 1, q, out);
                }
            }
            word[i] = orig;
        }
    }
    let mut out = Vec::new();
    rec(&mut z.to_vec(), 0, radius, q, &mut out);
    out
}

/// For every codeword `k` with nonzero weight on `state`, forces the clean
/// outcomes `x^(k)` through the sequential projectors, then decodes every
/// corruption within `radius` and compares `tau` with `rho_k`.
pub fn verify_guarantee(
    state: &QuantumState,
    set: &ObservableSet,
    radius: usize,
) -> Result<GuaranteeReport> {
    check_dims(state, set.dim())?;
    let code = set.code();
    let mut report = GuaranteeReport {
        radius,
        cases: 0,
        decode_failures: 0,
        max_state_deviation: 0.0,
        skipped_codewords: Vec::new(),
    };
    for (i, x) in code.codewords().iter().enumerate() {
        let k = i + 1;
        let Some((rho_k, _)) = state.collapse(set.povm().projector(k)?) else {
            report.skipped_codewords.push(k);
            continue;
        };
        // collapse one observable at a time, as the sequential measurement does
        let mut tau = state.clone();
        for (j, &z) in x.iter().enumerate() {
            let p = set.outcome_projector(j + 1, z)?;
            tau = match tau.collapse(p) {
                Some((next, _)) => next,
                None => {
                    return Err(Error::InvalidState(
                        "codeword outcome has zero weight".into(),
                    ))
                }
            };
        }
        let dev = tau.distance(&rho_k);
        for y in corruptions_within(x, code.q(), radius) {
            report.cases += 1;
            let decoded = code.decode_nearest(&y)?;
            if decoded.index != k {
                report.decode_failures += 1;
            }
            report.max_state_deviation = report.max_state_deviation.max(dev);
        }
    }
    Ok(report)
}

/// Per-trial summary kept by [`run_campaign`] when records are requested.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TrialRecord {
    pub trial: u64,
    pub true_index: usize,
    pub clean_word: Vec<u8>,
    pub corrupted_word: Vec<u8>,
    pub errors: usize,
    pub decoded_index: usize,
    pub distance: usize,
    pub beyond_radius: bool,
    pub within_guarantee: bool,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CampaignStats {
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub standard_error: f64,
    /// Trials with at most `t(C)` corrupted symbols.
    pub guaranteed_trials: u64,
    /// Guaranteed trials that decoded wrongly or left the wrong state.
    pub guaranteed_failures: u64,
    /// Decodes flagged as farther than `t(C)` from the chosen codeword.
    pub beyond_radius: u64,
    /// `true_counts[k - 1]` counts clean outcomes with label `k`.
    pub true_counts: Vec<u64>,
    pub decoded_counts: Vec<u64>,
    pub max_state_deviation: f64,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Vec::is_empty"))]
    pub records: Vec<TrialRecord>,
}

/// Runs `trials` independent trials; trial `i` uses stream `i` of `seed`.
pub fn run_campaign(
    state: &QuantumState,
    set: &ObservableSet,
    model: &NoiseModel,
    trials: u64,
    seed: u64,
    keep_records: bool,
) -> Result<CampaignStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let m = set.code().size();
    let mut stats = CampaignStats {
        trials,
        seed,
        successes: 0,
        success_rate: 0.0,
        standard_error: 0.0,
        guaranteed_trials: 0,
        guaranteed_failures: 0,
        beyond_radius: 0,
        true_counts: vec![0; m],
        decoded_counts: vec![0; m],
        max_state_deviation: 0.0,
        records: Vec::new(),
    };
    for trial in 0..trials {
        let mut rng = stream_rng(seed, trial);
        let tr = robust_measurement_trial(state, set, model, &mut rng)?;
        let success = tr.success();
        stats.successes += u64::from(success);
        stats.true_counts[tr.true_index - 1] += 1;
        stats.decoded_counts[tr.decoded.index - 1] += 1;
        stats.beyond_radius += u64::from(tr.decoded.beyond_radius);
        if tr.within_guarantee {
            stats.guaranteed_trials += 1;
            stats.guaranteed_failures += u64::from(!success);
            if let Some(d) = tr.state_deviation {
                stats.max_state_deviation = stats.max_state_deviation.max(d);
            }
        }
        if keep_records {
            stats.records.push(TrialRecord {
                trial,
                true_index: tr.true_index,
                errors: tr.error_positions.len(),
                decoded_index: tr.decoded.index,
                distance: tr.decoded.distance,
                beyond_radius: tr.decoded.beyond_radius,
                within_guarantee: tr.within_guarantee,
                success,
                clean_word: tr.clean_word,
                corrupted_word: tr.corrupted_word,
            });
        }
    }
    let p = stats.successes as f64 / trials as f64;
    stats.success_rate = p;
    stats.standard_error = libm::sqrt(p * (1.0 - p) / trials as f64);
    Ok(stats)
}

/// Exact probability that nearest-codeword decoding returns `k` when each
/// symbol of `x^(k)` is independently replaced with probability `p` by a
/// uniformly chosen other symbol. Enumerates all `q^n` received words.
pub fn exact_success_probabilities(code: &ClassicalCode, p: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("flip probability {p}")));
    }
    let q = code.q();
    let n = code.length();
    let total = (q as u128)
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| {
            Error::InvalidParameter("received-word space too large to enumerate".into())
        })?;
    let keep = 1.0 - p;
    let change = p / (q - 1) as f64;
    let mut success = vec![0.0; code.size()];
    let mut y = vec![0u8; n];
    for _ in 0..total {
        let d = code.decode_nearest(&y)?;
        let x = &code.codewords()[d.index - 1];
        let errs = crate::codes::distance_unchecked(x, &y);
        success[d.index - 1] += libm::pow(keep, (n - errs) as f64) * libm::pow(change, errs as f64);
        // next word in base q
        for s in y.iter_mut().rev() {
            if (*s as usize) + 1 < q {
                *s += 1;
                break;
            }
            *s = 0;
        }
    }
    Ok(success)
}

/// Symbol error rate below which the averaged exact success probability
/// reaches `target`, by bisection on [0, (q-1)/q].
pub fn flip_threshold_for_success(code: &ClassicalCode, target: f64) -> Result<f64> {
    let avg = |p: f64| -> Result<f64> {
        let s = exact_success_probabilities(code, p)?;
        Ok(s.iter().sum::<f64>() / s.len() as f64)
    };
    if avg(0.0)? < target {
        return Err(Error::Domain(format!(
            "success {target} unreachable even without noise"
        )));
    }
    let (mut lo, mut hi) = (0.0, (code.q() - 1) as f64 / code.q() as f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if avg(mid)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
