use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{Fitness, Problem};
use crate::solution::Solution;

/// Largest dimension [`brute_force_opt`] will enumerate.
pub const ENUMERATION_GUARD: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    /// The optimum with the smallest integer code (bit `i` weighted `2^i`).
    pub optimal_solution: Solution,
    pub opt: Fitness,
    pub count_of_optima: u64,
}

/// Exhaustive search over all `2^n` solutions, restricted to feasible ones.
pub fn brute_force_opt<P: Problem + ?Sized>(problem: &P) -> Result<OracleResult> {
    let n = problem.dimension();
    if n > ENUMERATION_GUARD {
        return Err(Error::Parameter(format!(
            "brute force is limited to n <= {ENUMERATION_GUARD}, got n = {n}"
        )));
    }
    let dir = problem.direction();
    let mut best: Option<OracleResult> = None;
    for code in 0..1u64 << n {
        let x = Solution::from_code(n, code);
        let e = problem.assess(&x)?;
        if !e.feasible {
            continue;
        }
        match &mut best {
            None => {
                best = Some(OracleResult {
                    optimal_solution: x,
                    opt: e.fitness,
                    count_of_optima: 1,
                })
            }
            Some(b) if dir.better(e.fitness, b.opt) => {
                *b = OracleResult {
                    optimal_solution: x,
                    opt: e.fitness,
                    count_of_optima: 1,
                }
            }
            Some(b) if e.fitness == b.opt => b.count_of_optima += 1,
            Some(_) => {}
        }
    }
    best.ok_or_else(|| Error::Validation("instance has no feasible solution".into()))
}
