//! q-ary block codes, nearest-codeword decoding and a few constructors.
//!
//! Codeword labels are 1-based at the public surface (`k = 1..=M`), matching
//! the labels of the projectors they are paired with. Storage is 0-based, so
//! label `k` lives at `codewords()[k - 1]`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A word over `{0, .., q-1}`.
pub type Word = Vec<u8>;

/// Largest supported alphabet (symbols are stored as `u8`).
pub const MAX_ALPHABET: usize = 256;

/// Number of positions at which `y` and `z` differ.
pub fn hamming_distance(y: &[u8], z: &[u8]) -> Result<usize> {
    if y.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            found: z.len(),
        });
    }
    Ok(distance_unchecked(y, z))
}

#[inline]
pub(crate) fn distance_unchecked(y: &[u8], z: &[u8]) -> usize {
    y.iter().zip(z).filter(|(a, b)| a != b).count()
}

/// An immutable q-ary code of length `n` with `M >= 1` distinct codewords.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassicalCode {
    q: usize,
    n: usize,
    codewords: Vec<Word>,
    #[cfg_attr(feature = "serde", serde(skip))]
    min_distance: Option<usize>,
}

impl ClassicalCode {
    /// Validates and wraps a codeword list. The block length is taken from
    /// the first word.
    pub fn new(q: usize, codewords: Vec<Word>) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&q) {
            return Err(Error::InvalidParameter(format!(
                "alphabet size {q} outside 2..={MAX_ALPHABET}"
            )));
        }
        let Some(first) = codewords.first() else {
            return Err(Error::InvalidParameter(
                "a code needs at least one codeword".into(),
            ));
        };
        let n = first.len();
        if n == 0 {
            return Err(Error::InvalidParameter(
                "block length must be at least 1".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for (i, w) in codewords.iter().enumerate() {
            if w.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
            if let Some(&s) = w.iter().find(|&&s| s as usize >= q) {
                return Err(Error::SymbolOutOfRange {
                    symbol: s as usize,
                    q,
                });
            }
            if !seen.insert(w.as_slice()) {
                return Err(Error::DuplicateCodeword { index: i + 1 });
            }
        }
        let min_distance = pairwise_min_distance(&codewords);
        Ok(Self {
            q,
            n,
            codewords,
            min_distance,
        })
    }

    /// Constant-word code of length `2t + 1`: one codeword per symbol.
    pub fn repetition(q: usize, t: usize) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&q) {
            return Err(Error::InvalidParameter(format!("alphabet size {q}")));
        }
        let n = 2 * t + 1;
        Self::new(q, (0..q).map(|s| vec![s as u8; n]).collect())
    }

    /// All `Z_q`-linear combinations of independent generator rows, for prime
    /// `q`.
    ///
    /// Codewords are listed by the support of their coefficient vector: first
    /// by support size, then lexicographically by support, then by the
    /// nonzero coefficients. For three binary generators this yields
    /// `0, a1, a2, a3, a1+a2, a1+a3, a2+a3, a1+a2+a3`.
    pub fn linear(q: usize, generators: &[Word]) -> Result<Self> {
        if !is_prime(q) || q > MAX_ALPHABET {
            return Err(Error::UnsupportedField { q });
        }
        let Some(first) = generators.first() else {
            return Err(Error::InvalidParameter(
                "at least one generator is required".into(),
            ));
        };
        let n = first.len();
        for g in generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.len(),
                });
            }
            if let Some(&s) = g.iter().find(|&&s| s as usize >= q) {
                return Err(Error::SymbolOutOfRange {
                    symbol: s as usize,
                    q,
                });
            }
        }
        let rank = rank_mod_p(generators, q);
        if rank < generators.len() {
            return Err(Error::RankDeficient {
                rank,
                rows: generators.len(),
            });
        }

        let r = generators.len();
        let mut words = Vec::with_capacity(q.pow(r as u32));
        for size in 0..=r {
            for support in subsets_of_size(r, size) {
                // every assignment of nonzero coefficients to the support
                let mut coeffs = vec![1usize; size];
                loop {
                    let mut w = vec![0usize; n];
                    for (&g, &c) in support.iter().zip(&coeffs) {
                        for (wi, &gi) in w.iter_mut().zip(&generators[g]) {
                            *wi = (*wi + c * gi as usize) % q;
                        }
                    }
                    words.push(w.into_iter().map(|s| s as u8).collect());
                    if !advance_nonzero(&mut coeffs, q) {
                        break;
                    }
                }
            }
        }
        Self::new(q, words)
    }

    /// The binary [6, 3, 3] shortened Hamming code with generators
    /// `100011`, `010101`, `001110`.
    pub fn shortened_hamming_6() -> Self {
        let generators = [
            vec![1, 0, 0, 0, 1, 1],
            vec![0, 1, 0, 1, 0, 1],
            vec![0, 0, 1, 1, 1, 0],
        ];
        Self::linear(2, &generators).expect("generators are independent")
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Block length `n`.
    pub fn length(&self) -> usize {
        self.n
    }

    /// Number of codewords `M`.
    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn codewords(&self) -> &[Word] {
        &self.codewords
    }

    /// Symbol `j` (1-based) of codeword `k` (1-based).
    pub fn symbol(&self, k: usize, j: usize) -> Result<u8> {
        let w = self.encode(k)?;
        if j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.n,
            });
        }
        Ok(w[j - 1])
    }

    /// The encoder: label `k` in `1..=M` to its codeword.
    pub fn encode(&self, k: usize) -> Result<&[u8]> {
        if k == 0 || k > self.size() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.size(),
            });
        }
        Ok(&self.codewords[k - 1])
    }

    /// Label of `word` if it is a codeword.
    pub fn index_of(&self, word: &[u8]) -> Option<usize> {
        self.codewords
            .iter()
            .position(|w| w.as_slice() == word)
            .map(|i| i + 1)
    }

    pub fn min_distance(&self) -> Result<usize> {
        self.min_distance.ok_or(Error::UndefinedDistance)
    }

    /// Guaranteed correction radius `floor((d - 1) / 2)`.
    pub fn error_radius(&self) -> Result<usize> {
        self.min_distance().map(|d| (d - 1) / 2)
    }

    /// Radius used for the "beyond guarantee" flag. A single-codeword code
    /// decodes every word correctly, so its radius is the whole space.
    fn guaranteed_radius(&self) -> usize {
        self.error_radius().unwrap_or(self.n)
    }

    pub fn check_word(&self, y: &[u8]) -> Result<()> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: y.len(),
            });
        }
        if let Some(&s) = y.iter().find(|&&s| s as usize >= self.q) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as usize,
                q: self.q,
            });
        }
        Ok(())
    }

    /// Nearest-codeword decoding with ties broken toward the smallest label.
    ///
    /// This is a `t(C)`-decoder: any word within distance `t(C)` of codeword
    /// `k` decodes to `k`. Words farther than `t(C)` from every codeword are
    /// still decoded but come back flagged.
    pub fn decode_nearest(&self, y: &[u8]) -> Result<Decoded> {
        self.check_word(y)?;
        let mut best = (usize::MAX, 0usize);
        let mut ties = 0;
        for (i, w) in self.codewords.iter().enumerate() {
            let dist = distance_unchecked(y, w);
            if dist < best.0 {
                best = (dist, i);
                ties = 1;
            } else if dist == best.0 {
                ties += 1;
            }
        }
        Ok(Decoded {
            index: best.1 + 1,
            distance: best.0,
            beyond_radius: best.0 > self.guaranteed_radius(),
            tied_candidates: ties,
            tie_break: TieBreak::SmallestIndex,
        })
    }
}

fn pairwise_min_distance(words: &[Word]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let d = distance_unchecked(a, b);
            best = Some(best.map_or(d, |m| m.min(d)));
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TieBreak {
    SmallestIndex,
}

/// Result of nearest-codeword decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Decoded {
    /// 1-based codeword label.
    pub index: usize,
    /// Distance from the received word to the chosen codeword.
    pub distance: usize,
    /// Set when `distance > t(C)`, where no correctness promise holds.
    pub beyond_radius: bool,
    /// Number of codewords at the minimal distance.
    pub tied_candidates: usize,
    pub tie_break: TieBreak,
}

/// A nearest-codeword decoder bound to a code with a declared correction
/// radius `a`.
#[derive(Debug, Clone, Copy)]
pub struct DecoderSpec<'a> {
    code: &'a ClassicalCode,
    radius: usize,
    tie_break: TieBreak,
}

impl<'a> DecoderSpec<'a> {
    /// The `t(C)`-decoder.
    pub fn guaranteed(code: &'a ClassicalCode) -> Self {
        Self {
            code,
            radius: code.guaranteed_radius(),
            tie_break: TieBreak::SmallestIndex,
        }
    }

    /// An `a`-decoder; `a` may not exceed `t(C)`.
    pub fn with_radius(code: &'a ClassicalCode, radius: usize) -> Result<Self> {
        let t = code.guaranteed_radius();
        if radius > t {
            return Err(Error::InvalidParameter(format!(
                "decoder radius {radius} exceeds the code's correction radius {t}"
            )));
        }
        Ok(Self {
            code,
            radius,
            tie_break: TieBreak::SmallestIndex,
        })
    }

    pub fn code(&self) -> &'a ClassicalCode {
        self.code
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    pub fn decode(&self, y: &[u8]) -> Result<Decoded> {
        let mut out = self.code.decode_nearest(y)?;
        out.beyond_radius = out.distance > self.radius;
        Ok(out)
    }
}

pub(crate) fn is_prime(q: usize) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// Rank of the rows over `Z_p`.
fn rank_mod_p(rows: &[Word], p: usize) -> usize {
    let mut m: Vec<Vec<usize>> = rows
        .iter()
        .map(|r| r.iter().map(|&s| s as usize).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = mod_inverse(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                let pivot_row = m[rank].clone();
                for (x, &y) in m[r].iter_mut().zip(&pivot_row).take(cols) {
                    *x = (*x + p * p - f * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: usize, p: usize) -> usize {
    // Fermat: a^(p-2) mod p
    let mut result = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn subsets_of_size(r: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, r: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(i + 1, r, size, cur, out);
            cur.pop();
        }
    }
    rec(0, r, size, &mut cur, &mut out);
    out
}

/// Odometer over `{1, .., q-1}^len`; false once it wraps.
fn advance_nonzero(coeffs: &mut [usize], q: usize) -> bool {
    for c in coeffs.iter_mut().rev() {
        if *c + 1 < q {
            *c += 1;
            return true;
        }
        *c = 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn hamming_distance_examples() {
        assert_eq!(hamming_distance(&w("000000"), &w("100011")).unwrap(), 3);
        assert_eq!(hamming_distance(&w("011011"), &w("111000")).unwrap(), 3);
        assert_eq!(hamming_distance(&w("011011"), &w("100100")).unwrap(), 6);
        assert_eq!(hamming_distance(&w("0121"), &w("0121")).unwrap(), 0);
        assert!(matches!(
            hamming_distance(&w("01"), &w("011")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn c6_matches_listed_codewords() {
        let c6 = ClassicalCode::shortened_hamming_6();
        let listed = [
            "000000", "100011", "010101", "001110", "110110", "101101", "011011", "111000",
        ];
        let expected: Vec<Word> = listed.iter().map(|s| w(s)).collect();
        assert_eq!(c6.codewords(), expected.as_slice());
        assert_eq!(c6.min_distance().unwrap(), 3);
        assert_eq!(c6.error_radius().unwrap(), 1);
        assert_eq!(c6.encode(7).unwrap(), w("011011").as_slice());
        assert_eq!(c6.encode(1).unwrap(), w("000000").as_slice());
        assert!(matches!(c6.encode(0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(c6.encode(9), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn decode_examples() {
        let c6 = ClassicalCode::shortened_hamming_6();
        let d = c6.decode_nearest(&w("110011")).unwrap();
        assert_eq!((d.index, d.distance, d.beyond_radius), (2, 1, false));
        let d = c6.decode_nearest(&w("011011")).unwrap();
        assert_eq!((d.index, d.distance), (7, 0));
        // two flips on x1 land next to x8
        let d = c6.decode_nearest(&w("110000")).unwrap();
        assert_eq!((d.index, d.distance), (8, 1));
        assert!(matches!(
            c6.decode_nearest(&w("11000")),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            c6.decode_nearest(&w("110002")),
            Err(Error::SymbolOutOfRange { .. })
        ));
    }

    #[test]
    fn deep_holes_are_flagged_and_tie_broken() {
        let c6 = ClassicalCode::shortened_hamming_6();
        // 100100 is at distance 2 from x1, x5 and x6
        let d = c6.decode_nearest(&w("100100")).unwrap();
        assert_eq!(d.distance, 2);
        assert!(d.beyond_radius);
        assert_eq!(d.index, 1);
        assert!(d.tied_candidates > 1);
    }

    #[test]
    fn repetition_codes() {
        let c = ClassicalCode::repetition(2, 1).unwrap();
        assert_eq!(c.codewords(), &[w("000"), w("111")]);
        let c = ClassicalCode::repetition(3, 1).unwrap();
        assert_eq!(c.codewords(), &[w("000"), w("111"), w("222")]);
        assert_eq!(c.min_distance().unwrap(), 3);
        let c = ClassicalCode::repetition(2, 2).unwrap();
        assert_eq!(c.length(), 5);
        assert_eq!(c.error_radius().unwrap(), 2);
        for q in 2..=5 {
            for t in 0..=3 {
                let c = ClassicalCode::repetition(q, t).unwrap();
                assert_eq!(c.min_distance().unwrap(), 2 * t + 1);
            }
        }
    }

    #[test]
    fn linear_constructor() {
        let c = ClassicalCode::linear(2, &[w("11")]).unwrap();
        assert_eq!(c.codewords(), &[w("00"), w("11")]);
        let c = ClassicalCode::linear(3, &[w("12")]).unwrap();
        assert_eq!(c.codewords(), &[w("00"), w("12"), w("21")]);
        assert_eq!(
            ClassicalCode::linear(4, &[w("12")]),
            Err(Error::UnsupportedField { q: 4 })
        );
        assert!(matches!(
            ClassicalCode::linear(2, &[w("101"), w("011"), w("110")]),
            Err(Error::RankDeficient { rank: 2, rows: 3 })
        ));
        assert!(matches!(
            ClassicalCode::linear(3, &[w("12"), w("21")]),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn invalid_codes_are_rejected() {
        assert!(matches!(
            ClassicalCode::new(2, vec![w("01"), w("01")]),
            Err(Error::DuplicateCodeword { index: 2 })
        ));
        assert!(matches!(
            ClassicalCode::new(2, vec![w("01"), w("2")]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ClassicalCode::new(2, vec![w("02")]),
            Err(Error::SymbolOutOfRange { symbol: 2, q: 2 })
        ));
        assert!(ClassicalCode::new(2, vec![]).is_err());
        assert!(ClassicalCode::new(1, vec![w("0")]).is_err());
    }

    #[test]
    fn single_codeword_has_no_distance() {
        let c = ClassicalCode::new(3, vec![w("012")]).unwrap();
        assert_eq!(c.min_distance(), Err(Error::UndefinedDistance));
        assert_eq!(c.error_radius(), Err(Error::UndefinedDistance));
        let d = c.decode_nearest(&w("222")).unwrap();
        assert_eq!(d.index, 1);
        assert!(!d.beyond_radius);
    }

    #[test]
    fn decoder_spec_radius() {
        let c6 = ClassicalCode::shortened_hamming_6();
        assert_eq!(DecoderSpec::guaranteed(&c6).radius(), 1);
        assert!(DecoderSpec::with_radius(&c6, 2).is_err());
        let zero = DecoderSpec::with_radius(&c6, 0).unwrap();
        assert!(zero.decode(&w("100000")).unwrap().beyond_radius);
    }

    #[test]
    fn primes() {
        let p: Vec<usize> = (0..20).filter(|&q| is_prime(q)).collect();
        assert_eq!(p, [2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
