//! Codeword arithmetic, problem parameters and weight-w enumeration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CwcError, Result};

/// Default cap on candidate storage for the greedy constructions (4 GiB).
pub const DEFAULT_MEMORY_LIMIT: u64 = 4 << 30;

/// Bytes held per candidate by a greedy pool: the word plus its 64-bit score.
pub const BYTES_PER_CANDIDATE: u64 = 16;

/// Largest supported word length; words live in one `u64`.
pub const MAX_N: u32 = 63;

/// An `(n, w, d, s)` instance: length, weight, minimum distance, target size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub n: u32,
    pub w: u32,
    pub d: u32,
    pub s: usize,
}

impl Params {
    /// Structurally valid parameters: `0 < w < n <= 63`, `d` even with
    /// `2 <= d <= 2w`, `s >= 1`.
    ///
    /// This admits toy instances (e.g. `d = 2`) used in tests and exact
    /// searches; [`Params::check_problem_bounds`] applies the tighter limits of
    /// the construction problem proper.
    pub fn new(n: u32, w: u32, d: u32, s: usize) -> Result<Self> {
        let p = Self { n, w, d, s };
        if n == 0 || n > MAX_N {
            return Err(invalid(format!("n = {n} must satisfy 0 < n < 64")));
        }
        if w == 0 || w >= n {
            return Err(invalid(format!("w = {w} must satisfy 0 < w < n = {n}")));
        }
        if !d.is_multiple_of(2) {
            return Err(invalid(format!("d = {d} must be even")));
        }
        if d < 2 || d > 2 * w {
            return Err(invalid(format!("d = {d} must satisfy 2 <= d <= 2w = {}", 2 * w)));
        }
        if s == 0 {
            return Err(invalid("s must be at least 1".into()));
        }
        Ok(p)
    }

    /// Parameters within the problem's stated bounds:
    /// `n < 64`, `3 < w < n`, `d` even with `4 <= d <= 20`, `s >= 1`.
    pub fn strict(n: u32, w: u32, d: u32, s: usize) -> Result<Self> {
        let p = Self::new(n, w, d, s)?;
        p.check_problem_bounds()?;
        Ok(p)
    }

    pub fn check_problem_bounds(&self) -> Result<()> {
        if self.w <= 3 {
            return Err(invalid(format!("w = {} violates 3 < w", self.w)));
        }
        if self.d < 4 || self.d > 20 {
            return Err(invalid(format!("d = {} violates 4 <= d <= 20", self.d)));
        }
        Ok(())
    }

    /// Same instance with a different target size.
    pub fn with_target(self, s: usize) -> Self {
        Self { s: s.max(1), ..self }
    }

    /// Largest distance two distinct weight-w words of length n can have.
    pub fn max_distance(&self) -> u32 {
        2 * self.w.min(self.n - self.w)
    }

    pub fn word_count(&self) -> u128 {
        binomial(self.n, self.w)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} w={} d={} s={}", self.n, self.w, self.d, self.s)
    }
}

fn invalid(msg: String) -> CwcError {
    CwcError::Validation(msg)
}

/// An n-bit word; bit `i` holds the symbol in column `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(transparent)]
pub struct Codeword(pub u64);

impl Codeword {
    #[inline]
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn bit(self, i: u32) -> bool {
        (self.0 >> i) & 1 == 1
    }

    #[inline]
    pub fn distance(self, other: Codeword) -> u32 {
        hamming_distance(self, other)
    }

    /// Word with ones at the given positions.
    pub fn from_positions<I: IntoIterator<Item = u32>>(positions: I) -> Self {
        Self(positions.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    /// Parses a `0`/`1` string, first character = bit 0.
    pub fn from_bit_str(s: &str) -> Option<Self> {
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' if i < 64 => bits |= 1 << i,
                _ => return None,
            }
        }
        Some(Self(bits))
    }

    /// Renders the first `n` bits as `0`/`1` characters, bit 0 first.
    pub fn to_bit_string(self, n: u32) -> String {
        (0..n).map(|i| if self.bit(i) { '1' } else { '0' }).collect()
    }
}

#[inline]
pub fn hamming_distance(a: Codeword, b: Codeword) -> u32 {
    (a.0 ^ b.0).count_ones()
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Ascending iterator over all `n`-bit words of weight `w`
/// (the next-combination bit trick).
#[derive(Clone, Debug)]
pub struct WeightWords {
    next: Option<u64>,
    limit: u64,
}

impl WeightWords {
    pub fn new(n: u32, w: u32) -> Self {
        assert!(n <= MAX_N, "n = {n} exceeds {MAX_N}");
        let limit = 1u64 << n;
        let next = match w {
            0 => Some(0),
            w if w > n => None,
            w => Some((1u64 << w) - 1),
        };
        Self { next, limit }
    }
}

impl Iterator for WeightWords {
    type Item = Codeword;

    #[inline]
    fn next(&mut self) -> Option<Codeword> {
        let x = self.next?;
        self.next = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            let y = (((r ^ x) >> 2) / c) | r;
            (y < self.limit).then_some(y)
        };
        Some(Codeword(x))
    }
}

/// Fails with `CapacityExceeded` when `count` candidates do not fit in `memory_limit`.
pub fn check_capacity(count: u128, memory_limit: u64) -> Result<()> {
    let bytes = count.saturating_mul(BYTES_PER_CANDIDATE as u128);
    if bytes > memory_limit as u128 {
        return Err(CwcError::CapacityExceeded {
            count,
            bytes_per_candidate: BYTES_PER_CANDIDATE,
            limit: memory_limit,
        });
    }
    Ok(())
}

/// All `C(n, w)` weight-`w` words in increasing numeric order.
pub fn enumerate_weight_w(n: u32, w: u32, memory_limit: u64) -> Result<Vec<Codeword>> {
    if w == 0 || w >= n || n > MAX_N {
        return Err(invalid(format!("enumeration needs 0 < w < n < 64, got n={n} w={w}")));
    }
    let count = binomial(n, w);
    check_capacity(count, memory_limit)?;
    let mut out = Vec::with_capacity(count as usize);
    out.extend(WeightWords::new(n, w));
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

/// Counts of pairwise distances, indexed by distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceHistogram {
    counts: Vec<u64>,
}

impl Default for DistanceHistogram {
    fn default() -> Self {
        Self {
            counts: vec![0; 65],
        }
    }
}

impl DistanceHistogram {
    pub fn count(&self, distance: u32) -> u64 {
        self.counts.get(distance as usize).copied().unwrap_or(0)
    }

    pub fn add(&mut self, distance: u32) {
        self.counts[distance as usize] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Non-zero `(distance, count)` entries in increasing distance.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(d, &c)| (d as u32, c))
    }
}

pub fn pairwise_histogram(words: &[Codeword]) -> DistanceHistogram {
    let mut h = DistanceHistogram::default();
    for (i, &a) in words.iter().enumerate() {
        for &b in &words[i + 1..] {
            h.add(hamming_distance(a, b));
        }
    }
    h
}

pub fn min_pairwise_distance(words: &[Codeword]) -> Result<u32> {
    if words.len() < 2 {
        return Err(CwcError::DegenerateInput(words.len()));
    }
    let mut best = u32::MAX;
    for (i, &a) in words.iter().enumerate() {
        for &b in &words[i + 1..] {
            best = best.min(hamming_distance(a, b));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Codeword {
        Codeword::from_bit_str(s).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hamming_distance(w("110100"), w("110100")), 0);
        assert_eq!(hamming_distance(w("110100"), w("101100")), 2);
    }

    #[test]
    fn params_bounds() {
        assert!(Params::strict(10, 4, 4, 30).is_ok());
        assert!(Params::strict(10, 4, 5, 30).is_err());
        assert!(Params::strict(10, 3, 4, 30).is_err());
        assert!(Params::strict(10, 4, 22, 30).is_err());
        assert!(Params::strict(64, 4, 4, 30).is_err());
        assert!(Params::strict(10, 4, 4, 0).is_err());
        assert!(Params::new(5, 4, 2, 5).is_ok());
        assert!(Params::new(4, 2, 6, 1).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 4), 210);
        assert_eq!(binomial(35, 16), 4_059_928_950);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(63, 31), 916_312_070_471_295_267);
    }

    #[test]
    fn enumerate_small() {
        let all = enumerate_weight_w(5, 4, DEFAULT_MEMORY_LIMIT).unwrap();
        let expect: Vec<Codeword> = [0b01111u64, 0b10111, 0b11011, 0b11101, 0b11110]
            .into_iter()
            .map(Codeword)
            .collect();
        assert_eq!(all, expect);
        assert_eq!(enumerate_weight_w(10, 4, DEFAULT_MEMORY_LIMIT).unwrap().len(), 210);
    }

    #[test]
    fn enumerate_top_bit() {
        let all: Vec<_> = WeightWords::new(63, 62).collect();
        assert_eq!(all.len(), 63);
        assert!(all.iter().all(|c| c.weight() == 62 && c.0 < 1 << 63));
    }

    #[test]
    fn capacity_exceeded() {
        match enumerate_weight_w(35, 16, DEFAULT_MEMORY_LIMIT) {
            Err(CwcError::CapacityExceeded { count, .. }) => assert_eq!(count, 4_059_928_950),
            other => panic!("expected CapacityExceeded, got {other:?}"),
        }
        assert!(enumerate_weight_w(10, 4, 100).is_err());
    }

    #[test]
    fn histogram_examples() {
        assert!(pairwise_histogram(&[w("1100")]).is_empty());
        let h = pairwise_histogram(&[w("1100"), w("1010"), w("0110")]);
        assert_eq!(h.iter().collect::<Vec<_>>(), vec![(2, 3)]);
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_pairwise_distance(&[w("1100"), w("0011")]).unwrap(), 4);
        assert_eq!(min_pairwise_distance(&[w("1100"), w("1100")]).unwrap(), 0);
        assert!(matches!(
            min_pairwise_distance(&[w("1100")]),
            Err(CwcError::DegenerateInput(1))
        ));
    }

    #[test]
    fn bit_string_round_trip() {
        let c = w("0010110");
        assert_eq!(c.0, 0b0110100);
        assert_eq!(c.to_bit_string(7), "0010110");
    }
}
