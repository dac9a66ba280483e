//! Standard bit-wise mutation: every bit flips independently with probability `1/n`.

use crate::rng::RandomSource;
use crate::solution::{apply_mask, FlipMask, Solution};

/// Draws the set of positions a bit-wise mutation of a length-`n` solution flips.
///
/// Each position is included with probability exactly `1/n` (a uniform draw
/// from `[0, n)` hitting zero). The mask may be empty.
pub fn sample_flip_mask(n: usize, rng: &mut RandomSource) -> FlipMask {
    assert!(n >= 1, "mutation needs at least one bit");
    let positions = (0..n).filter(|_| rng.below(n) == 0).collect();
    FlipMask::from_sorted(positions)
}

pub fn bitwise_mutate(x: &Solution, rng: &mut RandomSource) -> Solution {
    let mask = sample_flip_mask(x.len(), rng);
    apply_mask(x, &mask).expect("mask sampled for this length")
}
