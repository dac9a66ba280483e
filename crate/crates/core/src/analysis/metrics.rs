use serde::{Deserialize, Serialize};

use crate::algorithms::Archive;
use crate::error::{Error, Result};
use crate::problems::{Direction, Fitness, Problem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QdMetrics {
    /// Best fitness among feasible occupants; `None` if none is feasible.
    pub optimization: Option<Fitness>,
    /// Occupied cells.
    pub coverage: usize,
    /// Sum of fitness over all occupants, infeasible ones included.
    pub qd_score: f64,
}

pub fn qd_metrics<P: Problem + ?Sized>(archive: &Archive, problem: &P) -> QdMetrics {
    let dir = problem.direction();
    let optimization = archive
        .iter()
        .filter(|(_, e)| e.feasible)
        .map(|(_, e)| e.fitness)
        .max_by(|a, b| dir.rank(*a, *b));
    QdMetrics {
        optimization,
        coverage: archive.occupied_count(),
        qd_score: archive.iter().map(|(_, e)| e.fitness.value()).sum(),
    }
}

/// `fitness / opt`. For maximization this is at most 1; for minimization
/// at least 1.
pub fn approximation_ratio(fitness: Fitness, opt: Fitness, direction: Direction) -> Result<f64> {
    if opt.value() <= 0.0 {
        return Err(Error::Parameter(format!(
            "approximation ratio needs OPT > 0, got {opt} ({direction:?})"
        )));
    }
    Ok(fitness.value() / opt.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::Acceptance;
    use crate::instances::{example1_max_coverage, Example1Params};
    use crate::problems::MaxCoverageProblem;
    use crate::solution::Solution;

    fn ex1() -> (Example1Params, MaxCoverageProblem) {
        let p = Example1Params::new(30, 1, 10).unwrap();
        (p, MaxCoverageProblem::max_coverage(example1_max_coverage(&p).unwrap()))
    }

    #[test]
    fn empty_archive() {
        let (_, mc) = ex1();
        let m = qd_metrics(&Archive::new(31), &mc);
        assert_eq!(m.coverage, 0);
        assert_eq!(m.qd_score, 0.0);
        assert_eq!(m.optimization, None);
    }

    #[test]
    fn two_cells() {
        let (p, mc) = ex1();
        let mut a = Archive::new(31);
        for x in [Solution::zeros(30), p.optimum()] {
            let e = mc.assess(&x).unwrap();
            a.offer(x, e, mc.direction(), Acceptance::Strict);
        }
        let m = qd_metrics(&a, &mc);
        assert_eq!(m.optimization, Some(Fitness(209.0)));
        assert_eq!(m.coverage, 2);
        assert_eq!(m.qd_score, 209.0);
    }

    #[test]
    fn all_infeasible() {
        let (_, mc) = ex1();
        let mut a = Archive::new(31);
        for c in 12..17 {
            let x = Solution::from_indices(30, 0..c).unwrap();
            let e = mc.assess(&x).unwrap();
            a.offer(x, e, mc.direction(), Acceptance::Strict);
        }
        let m = qd_metrics(&a, &mc);
        assert_eq!(m.optimization, None);
        assert_eq!(m.qd_score, -5.0);
    }

    #[test]
    fn ratios() {
        let r = approximation_ratio(Fitness(121.0), Fitness(209.0), Direction::Maximize).unwrap();
        assert!((r - 1.1 / 1.9).abs() < 1e-12);
        assert!((r - 0.5789).abs() < 1e-4);
        // 2^(m+1) / m with m = 4
        assert_eq!(approximation_ratio(Fitness(32.0), Fitness(4.0), Direction::Minimize).unwrap(), 8.0);
        assert_eq!(approximation_ratio(Fitness(7.0), Fitness(7.0), Direction::Minimize).unwrap(), 1.0);
        assert!(approximation_ratio(Fitness(1.0), Fitness(0.0), Direction::Maximize).is_err());
    }
}
