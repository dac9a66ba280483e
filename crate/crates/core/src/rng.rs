//! Seeded randomness.
//!
//! [`RandomSource`] wraps ChaCha8 (`rand_chacha`), whose output stream is
//! fixed by its seed on every platform and across releases of the crate, so
//! a run is reproduced bit-for-bit from its 64-bit seed.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::solution::Solution;

#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The seed this source was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform integer in `[0, n)`. Exact: rejection sampling, no modulo bias.
    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0) has an empty range");
        self.inner.gen_range(0..n)
    }

    /// True with probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        self.inner.gen_bool(p)
    }

    /// A solution drawn uniformly from `{0,1}^n`.
    pub fn uniform_solution(&mut self, n: usize) -> Solution {
        let mut x = Solution::zeros(n);
        for i in 0..n {
            if self.inner.next_u32() & 1 == 1 {
                x.set(i, true);
            }
        }
        x
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::new(17);
        let mut b = RandomSource::new(17);
        let xs: Vec<usize> = (0..100).map(|_| a.below(1000)).collect();
        let ys: Vec<usize> = (0..100).map(|_| b.below(1000)).collect();
        assert_eq!(xs, ys);
        assert_eq!(a.uniform_solution(70), b.uniform_solution(70));
    }

    #[test]
    fn different_seeds_diverge() {
        let mut a = RandomSource::new(1);
        let mut b = RandomSource::new(2);
        assert_ne!(a.uniform_solution(64), b.uniform_solution(64));
    }

    #[test]
    fn uniform_solution_is_balanced() {
        let mut rng = RandomSource::new(5);
        let ones: usize = (0..2000).map(|_| rng.uniform_solution(50).count_ones()).sum();
        let mean = ones as f64 / 2000.0;
        // sd of the mean = sqrt(50 * 0.25 / 2000) ~ 0.079
        assert!((mean - 25.0).abs() < 0.4, "mean ones {mean}");
    }
}
