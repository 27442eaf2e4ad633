//! Code-size combinatorics: Hamming-ball volumes, sphere-packing bounds,
//! q-ary entropy, exact `A_q(n, d)` by clique search and the minimal length
//! `n_q(M, d)`.
//!
//! Exact search works on the graph whose vertices are words and whose edges
//! join words at distance `>= d`. Two reductions keep it tractable:
//!
//! * any code can be translated and have its coordinates and symbols
//!   relabeled so that it contains the zero word and `1^{d'} 0^{n-d'}`,
//!   where `d'` is its minimum distance; the search runs once per `d' >= d`
//!   over the words far enough from both, and splits further on the orbit
//!   of a third codeword under the symmetries fixing both anchors;
//! * for binary codes and even `d`, `A_2(n, d) = A_2(n - 1, d - 1)` and a
//!   parity bit extends the shorter witness.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::clique::{max_clique, CliqueLimits, Graph, SearchStatus};
use crate::codes::{distance_unchecked, ClassicalCode, Word, MAX_ALPHABET};
use crate::{Error, Result};

/// Largest word space searched exhaustively.
pub const MAX_SEARCH_WORDS: usize = 1 << 13;

/// Largest word space scanned by the greedy lexicode construction.
pub const MAX_GREEDY_WORDS: usize = 1 << 17;

/// Default work budget for one search request, in the units of
/// [`CliqueLimits::budget`].
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Volume of a q-ary Hamming ball: `sum_{j <= t} C(n, j) (q - 1)^j`.
pub fn ball_volume(q: usize, n: usize, t: usize) -> Result<BigUint> {
    check_alphabet(q)?;
    if t > n {
        return Err(Error::Domain(format!("radius {t} exceeds length {n}")));
    }
    let mut total = BigUint::zero();
    let mut binom = BigUint::one();
    let mut power = BigUint::one();
    for j in 0..=t {
        if j > 0 {
            binom = binom * (n - j + 1) / j;
            power *= q - 1;
        }
        total += &binom * &power;
    }
    Ok(total)
}

fn check_alphabet(q: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!(
            "alphabet size {q} below 2"
        )));
    }
    Ok(())
}

/// Natural logarithm of a big integer.
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(0.0);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// `log_q V_{q,n}(t)`.
pub fn log_ball_volume(q: usize, n: usize, t: usize) -> Result<f64> {
    Ok(ln_big(&ball_volume(q, n, t)?) / libm::log(q as f64))
}

fn big_pow(q: usize, n: usize) -> BigUint {
    BigUint::from(q).pow(n as u32)
}

/// `(q^n / V(2t), q^n / V(t))`: the Gilbert-Varshamov guarantee and the
/// Hamming (sphere-packing) limit for `A_q(n, 2t + 1)`.
pub fn sphere_packing_bounds(q: usize, n: usize, t: usize) -> Result<(f64, f64)> {
    if 2 * t > n {
        return Err(Error::Domain(format!("2t = {} exceeds length {n}", 2 * t)));
    }
    let space = ln_big(&big_pow(q, n));
    let lower = libm::exp(space - ln_big(&ball_volume(q, n, 2 * t)?));
    let upper = libm::exp(space - ln_big(&ball_volume(q, n, t)?));
    Ok((lower, upper))
}

/// `ceil(q^n / V(d - 1))`, a size always attained by the greedy code.
pub fn gilbert_varshamov_size(q: usize, n: usize, d: usize) -> Result<BigUint> {
    if d == 0 || d > n + 1 {
        return Err(Error::Domain(format!("distance {d} for length {n}")));
    }
    let v = ball_volume(q, n, d - 1)?;
    Ok((big_pow(q, n) + &v - 1u32) / v)
}

/// Upper bound on `A_q(n, d)`: the smaller of the Hamming and Singleton
/// bounds, with the binary even-distance identity applied first.
pub fn size_upper_bound(q: usize, n: usize, d: usize) -> Result<BigUint> {
    check_alphabet(q)?;
    if d == 0 {
        return Err(Error::Domain("distance must be positive".into()));
    }
    if d > n {
        return Ok(BigUint::one());
    }
    if q == 2 && d.is_multiple_of(2) && n >= 2 {
        return size_upper_bound(2, n - 1, d - 1);
    }
    let hamming = big_pow(q, n) / ball_volume(q, n, (d - 1) / 2)?;
    let singleton = big_pow(q, n + 1 - d);
    Ok(hamming.min(singleton))
}

/// `H_q(x) = -x log_q x - (1-x) log_q(1-x) + x log_q(q-1)`, with `0 log 0 = 0`.
pub fn q_ary_entropy(q: usize, x: f64) -> Result<f64> {
    check_alphabet(q)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "entropy argument {x} outside [0, 1]"
        )));
    }
    let ln_q = libm::log(q as f64);
    let xlogx = |v: f64| if v == 0.0 { 0.0 } else { v * libm::log(v) };
    Ok((-xlogx(x) - xlogx(1.0 - x) + x * libm::log((q - 1) as f64)) / ln_q)
}

/// Asymptotic estimates `(log_q M / (1 - H_q(e)), log_q M / (1 - H_q(2e)))`
/// for the number of observables correcting a fraction `e` of outcome
/// errors. The `o(1)` corrections are dropped, so these are estimates, not
/// bounds valid at any particular finite length.
pub fn asymptotic_length_bounds(q: usize, m: u64, epsilon_frac: f64) -> Result<(f64, f64)> {
    check_alphabet(q)?;
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "outcome count {m} below 2"
        )));
    }
    let limit = (q - 1) as f64 / q as f64;
    if !(epsilon_frac >= 0.0 && 2.0 * epsilon_frac < limit) {
        return Err(Error::Domain(format!(
            "error fraction {epsilon_frac} needs 0 <= 2e < {limit}"
        )));
    }
    let log_m = libm::log(m as f64) / libm::log(q as f64);
    let lower = log_m / (1.0 - q_ary_entropy(q, epsilon_frac)?);
    let upper = log_m / (1.0 - q_ary_entropy(q, 2.0 * epsilon_frac)?);
    Ok((lower, upper))
}

/// Distance requirement used when translating a correction radius `t`
/// into a code distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Convention {
    /// `d = 2t + 1`, the least distance that corrects `t` errors.
    Strict,
    /// `d = 2t + 2`.
    Even,
}

impl Convention {
    pub const BOTH: [Convention; 2] = [Convention::Strict, Convention::Even];

    pub fn distance(self, t: usize) -> usize {
        match self {
            Self::Strict => 2 * t + 1,
            Self::Even => 2 * t + 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Strict => "strict",
            Self::Even => "even",
        }
    }
}

/// Either an exact value or a certified interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Bounded {
    Exact {
        value: u64,
    },
    /// `upper = None` means no upper bound was established.
    Bracket {
        lower: u64,
        upper: Option<u64>,
    },
}

impl Bounded {
    pub fn exact(&self) -> Option<u64> {
        match *self {
            Self::Exact { value } => Some(value),
            Self::Bracket { .. } => None,
        }
    }

    pub fn lower(&self) -> u64 {
        match *self {
            Self::Exact { value } => value,
            Self::Bracket { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> Option<u64> {
        match *self {
            Self::Exact { value } => Some(value),
            Self::Bracket { upper, .. } => upper,
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        v >= self.lower() && self.upper().is_none_or(|u| v <= u)
    }
}

impl core::fmt::Display for Bounded {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::Exact { value } => write!(f, "{value}"),
            Self::Bracket {
                lower,
                upper: Some(u),
            } => write!(f, "[{lower},{u}]"),
            Self::Bracket { lower, upper: None } => write!(f, "[{lower},)"),
        }
    }
}

/// Certificate for `A_q(n, d)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SizeCertificate {
    pub q: usize,
    pub n: usize,
    pub d: usize,
    pub result: Bounded,
    /// A code attaining `result.lower()`; always present for exact results.
    pub witness: Option<ClassicalCode>,
    pub work: u64,
}

/// Outcome of asking whether a length-`n` code with `M` words and distance
/// `d` exists.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// Witness code with at least `M` codewords.
    Feasible(ClassicalCode),
    /// The Gilbert-Varshamov guarantee covers `M`, but the word space is too
    /// large to build the greedy witness.
    FeasibleByBound,
    Infeasible,
    /// The search budget ran out first.
    Unknown,
}

/// Certificate for `n_q(M, d)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LengthCertificate {
    pub q: usize,
    pub m: u64,
    pub d: usize,
    pub result: Bounded,
    /// Code of length `result.upper()` with at least `m` codewords.
    pub witness: Option<ClassicalCode>,
    pub work: u64,
}

impl LengthCertificate {
    pub fn witness_available(&self) -> bool {
        self.witness.is_some()
    }
}

fn word_from_index(mut idx: usize, q: usize, n: usize) -> Word {
    let mut w = vec![0u8; n];
    for s in w.iter_mut().rev() {
        *s = (idx % q) as u8;
        idx /= q;
    }
    w
}

fn all_words(q: usize, n: usize) -> Option<Vec<Word>> {
    let count = q.checked_pow(n as u32)?;
    Some((0..count).map(|i| word_from_index(i, q, n)).collect())
}

fn word_count(q: usize, n: usize) -> Option<usize> {
    q.checked_pow(n as u32)
}

/// Greedy lexicode: scan words in lexicographic order, keeping each one at
/// distance `>= d` from all kept words. Its size is at least the
/// Gilbert-Varshamov bound.
pub fn greedy_code(q: usize, n: usize, d: usize) -> Result<ClassicalCode> {
    check_alphabet(q)?;
    let count = word_count(q, n)
        .filter(|&c| c <= MAX_GREEDY_WORDS)
        .ok_or_else(|| Error::InvalidParameter(format!("{q}^{n} words exceed the greedy limit")))?;
    let mut kept: Vec<Word> = Vec::new();
    for i in 0..count {
        let w = word_from_index(i, q, n);
        if kept.iter().all(|c| distance_unchecked(c, &w) >= d) {
            kept.push(w);
        }
    }
    ClassicalCode::new(q, kept)
}

fn extend_with_parity(code: &ClassicalCode) -> ClassicalCode {
    let words = code
        .codewords()
        .iter()
        .map(|w| {
            let mut e = w.clone();
            e.push(w.iter().fold(0u8, |acc, &s| acc ^ s));
            e
        })
        .collect();
    ClassicalCode::new(2, words).expect("extension keeps codewords distinct")
}

/// Search state shared across the per-`d'` clique problems.
struct CodeSearch {
    q: usize,
    n: usize,
    words: Vec<Word>,
}

enum Goal {
    /// Find the maximum size.
    Maximize,
    /// Find a code with at least this many words.
    Reach(usize),
}

struct SearchResult {
    best: Vec<Word>,
    complete: bool,
    work: u64,
}

impl CodeSearch {
    fn new(q: usize, n: usize) -> Option<Self> {
        let words = all_words(q, n).filter(|w| w.len() <= MAX_SEARCH_WORDS)?;
        Some(Self { q, n, words })
    }

    /// Pair anchor `1^{dp} 0^{n-dp}`.
    fn anchor(&self, dp: usize) -> Word {
        let mut w = vec![0u8; self.n];
        w[..dp].iter_mut().for_each(|s| *s = 1);
        w
    }

    /// Words compatible with the anchors `0` and `1^{dp}0^{n-dp}`, ordered
    /// by weight so that low-weight words are branched last.
    fn candidates(&self, dp: usize) -> Vec<&Word> {
        let zero = vec![0u8; self.n];
        let anchor = self.anchor(dp);
        let mut cands: Vec<&Word> = self
            .words
            .iter()
            .filter(|w| distance_unchecked(w, &zero) >= dp && distance_unchecked(w, &anchor) >= dp)
            .collect();
        cands.sort_by_key(|w| {
            (
                core::cmp::Reverse(distance_unchecked(w, &zero)),
                w.as_slice(),
            )
        });
        cands
    }

    /// Orbit label of `w` under the symmetries fixing both anchors:
    /// coordinate permutations inside `[0, dp)` and `[dp, n)`, and symbol
    /// permutations fixing 0 (and 1 on the first block).
    fn orbit_key(&self, w: &Word, dp: usize) -> (usize, usize, usize) {
        let zeros = |s: &[u8]| s.iter().filter(|&&x| x == 0).count();
        let ones = w[..dp].iter().filter(|&&x| x == 1).count();
        (zeros(&w[..dp]), ones, zeros(&w[dp..]))
    }

    fn run(&self, d: usize, goal: Goal, seed: Vec<Word>, budget: u64) -> SearchResult {
        let mut best = seed;
        let mut work = 0u64;
        let mut complete = true;
        'distances: for dp in d..=self.n {
            let ub = size_upper_bound(self.q, self.n, dp)
                .ok()
                .and_then(|b| b.to_usize())
                .unwrap_or(usize::MAX);
            let floor_total = match goal {
                Goal::Maximize => best.len(),
                Goal::Reach(m) => m - 1,
            };
            if ub <= floor_total {
                continue;
            }
            let cands = self.candidates(dp);
            let keys: Vec<_> = cands.iter().map(|w| self.orbit_key(w, dp)).collect();
            let full = Graph::from_fn(cands.len(), |u, v| {
                distance_unchecked(cands[u], cands[v]) >= dp
            });
            let mut orbits = keys.clone();
            orbits.sort_unstable();
            orbits.dedup();
            // largest orbits first, so later passes exclude the most words
            orbits.sort_by_key(|o| core::cmp::Reverse(keys.iter().filter(|k| *k == o).count()));
            // Each pass fixes a third codeword from one orbit and forbids
            // the orbits already handled.
            for (i, orbit) in orbits.iter().enumerate() {
                let floor_total = match goal {
                    Goal::Maximize => best.len(),
                    Goal::Reach(m) => {
                        if best.len() >= m {
                            break 'distances;
                        }
                        m - 1
                    }
                };
                if ub <= floor_total {
                    break;
                }
                let r = keys
                    .iter()
                    .position(|k| k == orbit)
                    .expect("orbit has a member");
                let base = [vec![0u8; self.n], self.anchor(dp), cands[r].clone()];
                if best.len() < base.len() {
                    best = base.to_vec();
                    if matches!(goal, Goal::Reach(m) if m <= best.len()) {
                        break 'distances;
                    }
                }
                let sub: Vec<usize> = (0..cands.len())
                    .filter(|&j| full.has_edge(r, j) && !orbits[..i].contains(&keys[j]))
                    .collect();
                if sub.is_empty() {
                    continue;
                }
                let floor_total = match goal {
                    Goal::Maximize => best.len(),
                    Goal::Reach(m) => m - 1,
                };
                let target_total = match goal {
                    Goal::Maximize => ub,
                    Goal::Reach(m) => m,
                };
                let remaining = budget.saturating_sub(work);
                if remaining == 0 {
                    complete = false;
                    break 'distances;
                }
                let graph = full.induced(&sub);
                let out = max_clique(
                    &graph,
                    CliqueLimits {
                        floor: floor_total.saturating_sub(base.len()),
                        target: Some(target_total.saturating_sub(base.len())),
                        budget: remaining,
                    },
                );
                work += out.work;
                if !out.clique.is_empty() && out.clique.len() + base.len() > best.len() {
                    let mut code = base.to_vec();
                    code.extend(out.clique.iter().map(|&j| cands[sub[j]].clone()));
                    best = code;
                }
                match out.status {
                    SearchStatus::BudgetExhausted => {
                        complete = false;
                        break 'distances;
                    }
                    SearchStatus::TargetReached if matches!(goal, Goal::Reach(_)) => {
                        break 'distances
                    }
                    _ => {}
                }
            }
        }
        SearchResult {
            best,
            complete,
            work,
        }
    }
}

/// Exact `A_q(n, d)` by branch-and-bound when the word space is small
/// enough (at most [`MAX_SEARCH_WORDS`] after reductions) and the budget
/// suffices; otherwise a bracket between the best code found and the
/// Hamming/Singleton bound.
pub fn max_code_size_exact(q: usize, n: usize, d: usize, budget: u64) -> Result<SizeCertificate> {
    check_alphabet(q)?;
    if q > MAX_ALPHABET || n == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "(q, n, d) = ({q}, {n}, {d})"
        )));
    }
    if d > n {
        let witness = ClassicalCode::new(q, vec![vec![0; n]])?;
        return Ok(exact_size(q, n, d, witness, 0));
    }
    if d == 1 {
        let words = all_words(q, n)
            .filter(|w| w.len() <= MAX_GREEDY_WORDS)
            .ok_or_else(|| Error::InvalidParameter(format!("{q}^{n} words is too many to list")))?;
        return Ok(exact_size(q, n, d, ClassicalCode::new(q, words)?, 0));
    }
    if q == 2 && d.is_multiple_of(2) {
        let mut cert = max_code_size_exact(2, n - 1, d - 1, budget)?;
        cert.n = n;
        cert.d = d;
        cert.witness = cert.witness.as_ref().map(extend_with_parity);
        return Ok(cert);
    }

    let upper = size_upper_bound(q, n, d)?.to_u64().unwrap_or(u64::MAX);
    let greedy = greedy_code(q, n, d).ok();
    let Some(search) = CodeSearch::new(q, n) else {
        let gv = gilbert_varshamov_size(q, n, d)?
            .to_u64()
            .unwrap_or(u64::MAX);
        let lower = greedy.as_ref().map_or(gv, |g| (g.size() as u64).max(gv));
        return Ok(SizeCertificate {
            q,
            n,
            d,
            result: bracket_or_exact(lower, upper, greedy.is_some()),
            witness: greedy,
            work: 0,
        });
    };
    let seed = greedy.map(|g| g.codewords().to_vec()).unwrap_or_default();
    let res = search.run(d, Goal::Maximize, seed, budget);
    let size = res.best.len() as u64;
    let witness = ClassicalCode::new(q, res.best)?;
    let result = if res.complete || size == upper {
        Bounded::Exact { value: size }
    } else {
        Bounded::Bracket {
            lower: size,
            upper: Some(upper),
        }
    };
    Ok(SizeCertificate {
        q,
        n,
        d,
        result,
        witness: Some(witness),
        work: res.work,
    })
}

fn bracket_or_exact(lower: u64, upper: u64, witnessed: bool) -> Bounded {
    if lower == upper && witnessed {
        Bounded::Exact { value: lower }
    } else {
        Bounded::Bracket {
            lower,
            upper: Some(upper),
        }
    }
}

fn exact_size(q: usize, n: usize, d: usize, witness: ClassicalCode, work: u64) -> SizeCertificate {
    SizeCertificate {
        q,
        n,
        d,
        result: Bounded::Exact {
            value: witness.size() as u64,
        },
        witness: Some(witness),
        work,
    }
}

/// Decides whether a q-ary code of length `n`, distance `>= d` and at least
/// `m` codewords exists. Returns the verdict and the search work spent.
pub fn code_of_size(
    q: usize,
    n: usize,
    d: usize,
    m: u64,
    budget: u64,
) -> Result<(Feasibility, u64)> {
    check_alphabet(q)?;
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!("(n, d) = ({n}, {d})")));
    }
    if m <= 1 {
        return Ok((
            Feasibility::Feasible(ClassicalCode::new(q, vec![vec![0; n]])?),
            0,
        ));
    }
    if size_upper_bound(q, n, d)? < BigUint::from(m) {
        return Ok((Feasibility::Infeasible, 0));
    }
    if q == 2 && d.is_multiple_of(2) {
        let (f, work) = code_of_size(2, n - 1, d - 1, m, budget)?;
        let f = match f {
            Feasibility::Feasible(c) => Feasibility::Feasible(extend_with_parity(&c)),
            other => other,
        };
        return Ok((f, work));
    }
    if d == 1 {
        let words = (0..m as usize).map(|i| word_from_index(i, q, n)).collect();
        return Ok((Feasibility::Feasible(ClassicalCode::new(q, words)?), 0));
    }
    let greedy = greedy_code(q, n, d).ok();
    if let Some(g) = &greedy {
        if g.size() as u64 >= m {
            return Ok((Feasibility::Feasible(g.clone()), 0));
        }
    } else if gilbert_varshamov_size(q, n, d)? >= BigUint::from(m) {
        return Ok((Feasibility::FeasibleByBound, 0));
    }
    let Some(search) = CodeSearch::new(q, n) else {
        return Ok((Feasibility::Unknown, 0));
    };
    let target = usize::try_from(m).unwrap_or(usize::MAX);
    let res = search.run(d, Goal::Reach(target), Vec::new(), budget);
    let verdict = if res.best.len() >= target {
        Feasibility::Feasible(ClassicalCode::new(q, res.best)?)
    } else if res.complete {
        Feasibility::Infeasible
    } else {
        Feasibility::Unknown
    };
    Ok((verdict, res.work))
}

/// Smallest `n` admitting a q-ary code with `m` codewords at distance `d`,
/// scanning lengths upward. Lengths the search cannot settle within the
/// budget turn the answer into a bracket.
pub fn min_length(q: usize, m: u64, d: usize, budget: u64) -> Result<LengthCertificate> {
    check_alphabet(q)?;
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "outcome count {m} below 2"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("distance must be positive".into()));
    }
    let mut work = 0u64;
    let mut lower = d.max(1);
    let mut n = d.max(1);
    loop {
        let remaining = budget.saturating_sub(work);
        let (verdict, used) = code_of_size(q, n, d, m, remaining)?;
        work += used;
        match verdict {
            Feasibility::Infeasible => {
                // A_q(n, d) is non-decreasing in n, so every shorter length fails too
                lower = n + 1;
            }
            Feasibility::Unknown => {}
            Feasibility::Feasible(code) => {
                let result = if lower == n {
                    Bounded::Exact { value: n as u64 }
                } else {
                    Bounded::Bracket {
                        lower: lower as u64,
                        upper: Some(n as u64),
                    }
                };
                return Ok(LengthCertificate {
                    q,
                    m,
                    d,
                    result,
                    witness: Some(code),
                    work,
                });
            }
            Feasibility::FeasibleByBound => {
                return Ok(LengthCertificate {
                    q,
                    m,
                    d,
                    result: Bounded::Bracket {
                        lower: lower as u64,
                        upper: Some(n as u64),
                    },
                    witness: None,
                    work,
                });
            }
        }
        n += 1;
    }
}

/// `n_q(M, d)` with `d` taken from a correction radius and convention.
pub fn min_length_for_radius(
    q: usize,
    m: u64,
    t: usize,
    convention: Convention,
    budget: u64,
) -> Result<LengthCertificate> {
    min_length(q, m, convention.distance(t), budget)
}
