use crate::error::{Error, Result};
use crate::instances::{example1_max_coverage, Example1Params, Example2Params};
use crate::problems::Problem;
use crate::solution::Solution;

use super::{binomial, for_each_combination};

/// Largest dimension [`escape_radius`] will search.
pub const ESCAPE_GUARD: usize = 20;

/// Minimum Hamming distance from `x` to a strictly better solution, or
/// `n + 1` if `x` is globally optimal. Searches Hamming spheres of growing
/// radius and stops at the first improvement.
pub fn escape_radius<P: Problem + ?Sized>(x: &Solution, problem: &P) -> Result<usize> {
    let n = problem.dimension();
    if n > ESCAPE_GUARD {
        return Err(Error::Parameter(format!(
            "escape radius search is limited to n <= {ESCAPE_GUARD}, got n = {n}"
        )));
    }
    let here = problem.evaluate(x)?;
    let dir = problem.direction();
    let mut y = x.clone();
    for d in 1..=n {
        let found = for_each_combination(n, d, |flips| {
            for &i in flips {
                y.toggle(i);
            }
            let better = dir.better(problem.evaluate(&y).expect("length checked"), here);
            for &i in flips {
                y.toggle(i);
            }
            better
        });
        if found {
            return Ok(d);
        }
    }
    Ok(n + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrapParams {
    Example1(Example1Params),
    Example2(Example2Params),
}

/// For the canonical max-coverage local optimum `0^left 1^k 0^(right-k)`:
/// the fewest leading 0-bits `i` and the fewest 1-bits `d` any strictly
/// better feasible offspring flips, found by enumerating every
/// (left sets added, chosen right sets dropped, other right sets added)
/// combination against the instance's exact coverage arithmetic.
pub fn example1_escape_pair(p: &Example1Params) -> Result<Option<(usize, usize)>> {
    p.validate()?;
    let inst = example1_max_coverage(p)?;
    let (left, right, k) = (p.left(), p.right(), p.k());
    let local = p.local_optimum_value();
    let covered = |i: usize, r: usize| -> u64 {
        // a representative: first i left sets, first r right sets
        let x = Solution::from_indices(p.n, (0..i).chain(left..left + r)).expect("in range");
        crate::problems::coverage_count(&x, inst.sets(), inst.m_elements()) as u64
    };
    let mut best: Option<(usize, usize)> = None;
    for i in 0..=left {
        for d in 0..=k {
            for a in 0..=right - k {
                let r = k - d + a;
                if i + r > k || covered(i, r) <= local {
                    continue;
                }
                best = Some(match best {
                    None => (i, d),
                    Some((bi, bd)) => (bi.min(i), bd.min(d)),
                });
            }
        }
    }
    Ok(best)
}

/// Upper bound on the probability that one bit-wise mutation of the trapped
/// local optimum yields a strictly better solution.
///
/// * Star set cover: exactly `n^-n`, since all `n` bits must flip.
/// * Bipartite max coverage: with `(i_min, d_min)` from
///   [`example1_escape_pair`], the sum over `i >= i_min`,
///   `d >= max(i, d_min)` of `C(left, i) C(k, d) n^-(i+d)`.
pub fn trap_escape_probability_bound(params: &TrapParams) -> Result<f64> {
    match params {
        TrapParams::Example2(p) => {
            let n = p.n as f64;
            Ok(n.powf(-n))
        }
        TrapParams::Example1(p) => {
            let Some((i_min, d_min)) = example1_escape_pair(p)? else {
                return Ok(0.0);
            };
            let n = p.n as f64;
            let (left, k) = (p.left(), p.k());
            let mut total = 0.0;
            for i in i_min..=left {
                for d in i.max(d_min)..=k {
                    total += binomial(left, i) * binomial(k, d) * n.powi(-((i + d) as i32));
                }
            }
            Ok(total)
        }
    }
}
