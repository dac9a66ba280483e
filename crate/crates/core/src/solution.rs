//! Fixed-length bit vectors and flip masks.
//!
//! Bit `i` of a [`Solution`] selects set `S_{i+1}` of the ground collection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A subset of the ground collection, stored as packed bits.
///
/// The length is fixed at construction. Bits past `len` in the last word
/// are always zero so word-level comparisons and popcounts are exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    words: Vec<u64>,
    len: usize,
}

impl Solution {
    pub fn zeros(n: usize) -> Self {
        Solution {
            words: vec![0; words_for(n)],
            len: n,
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut s = Solution::zeros(n);
        for i in 0..n {
            s.set(i, true);
        }
        s
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Solution::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    /// Builds a solution of length `n` with exactly the given positions set.
    pub fn from_indices(n: usize, ones: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Solution::zeros(n);
        for i in ones {
            if i >= n {
                return Err(Error::Contract(format!("bit index {i} out of range for length {n}")));
            }
            s.set(i, true);
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub(crate) fn toggle(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Number of 1-bits, written `|x|`.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the 1-bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn hamming_distance(&self, other: &Solution) -> usize {
        assert_eq!(self.len, other.len, "hamming distance of unequal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// True if every 1-bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Solution) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Decodes the low `n` bits of `code`, bit `i` of the integer becoming bit `i`.
    pub fn from_code(n: usize, code: u64) -> Self {
        assert!(n <= 64, "from_code supports n <= 64");
        let mut s = Solution::zeros(n);
        if n > 0 {
            s.words[0] = if n == 64 { code } else { code & ((1u64 << n) - 1) };
        }
        s
    }

    /// Inverse of [`Solution::from_code`] for `n <= 64`.
    pub fn code(&self) -> u64 {
        assert!(self.len <= 64, "code() supports n <= 64");
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Solution({self})")
    }
}

impl FromStr for Solution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    context: format!("solution position {i}"),
                    message: format!("expected '0' or '1', found {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.is_empty() {
            return Err(Error::Parse {
                context: "solution".into(),
                message: "empty bit string".into(),
            });
        }
        Ok(Solution::from_bits(&bits))
    }
}

impl Serialize for Solution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Solution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Set of distinct bit positions to flip.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FlipMask {
    positions: Vec<usize>,
}

impl FlipMask {
    /// Builds a mask, rejecting duplicates. Positions are kept sorted.
    pub fn new(mut positions: Vec<usize>) -> Result<Self> {
        positions.sort_unstable();
        if positions.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Contract("flip mask positions must be distinct".into()));
        }
        Ok(FlipMask { positions })
    }

    /// `positions` must already be strictly increasing.
    pub(crate) fn from_sorted(positions: Vec<usize>) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        FlipMask { positions }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Returns a copy of `x` with every masked bit flipped.
pub fn apply_mask(x: &Solution, mask: &FlipMask) -> Result<Solution> {
    if let Some(&bad) = mask.positions.iter().find(|&&p| p >= x.len()) {
        return Err(Error::Contract(format!(
            "flip position {bad} out of range for length {}",
            x.len()
        )));
    }
    let mut y = x.clone();
    for &p in &mask.positions {
        y.toggle(p);
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sol(s: &str) -> Solution {
        s.parse().unwrap()
    }

    #[test]
    fn apply_mask_examples() {
        let empty = FlipMask::default();
        assert_eq!(apply_mask(&sol("00000"), &empty).unwrap(), sol("00000"));
        let ends = FlipMask::new(vec![0, 4]).unwrap();
        assert_eq!(apply_mask(&sol("00000"), &ends).unwrap(), sol("10001"));
        assert_eq!(apply_mask(&sol("10001"), &ends).unwrap(), sol("00000"));
    }

    #[test]
    fn apply_mask_rejects_out_of_range() {
        let m = FlipMask::new(vec![5]).unwrap();
        assert!(matches!(apply_mask(&sol("00000"), &m), Err(Error::Contract(_))));
    }

    #[test]
    fn mask_rejects_duplicates() {
        assert!(FlipMask::new(vec![1, 3, 1]).is_err());
    }

    #[test]
    fn parse_and_display() {
        let x = sol("10110");
        assert_eq!(x.len(), 5);
        assert_eq!(x.count_ones(), 3);
        assert_eq!(x.to_string(), "10110");
        assert_eq!(x.iter_ones().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert!("10a".parse::<Solution>().is_err());
    }

    #[test]
    fn long_solutions_span_words() {
        let mut x = Solution::zeros(130);
        x.set(0, true);
        x.set(64, true);
        x.set(129, true);
        assert_eq!(x.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(Solution::ones(130).count_ones(), 130);
    }

    proptest! {
        #[test]
        fn apply_mask_is_an_involution(
            bits in proptest::collection::vec(any::<bool>(), 1..100),
            picks in proptest::collection::btree_set(0usize..100, 0..20),
        ) {
            let x = Solution::from_bits(&bits);
            let mask = FlipMask::new(picks.into_iter().filter(|&p| p < bits.len()).collect()).unwrap();
            let y = apply_mask(&x, &mask).unwrap();
            prop_assert_eq!(y.len(), x.len());
            prop_assert_eq!(x.hamming_distance(&y), mask.len());
            prop_assert_eq!(apply_mask(&y, &mask).unwrap(), x);
        }

        #[test]
        fn code_round_trips(n in 1usize..=64, code in any::<u64>()) {
            let x = Solution::from_code(n, code);
            let expect = if n == 64 { code } else { code & ((1 << n) - 1) };
            prop_assert_eq!(x.code(), expect);
            prop_assert_eq!(x.count_ones(), expect.count_ones() as usize);
        }
    }
}
