//! Exact oracles and diagnostics: brute-force optima, greedy baselines, the
//! submodularity ratio, local-optimum escape analysis, and QD metrics.

mod escape;
mod greedy;
mod metrics;
mod oracle;
mod submodularity;

pub use escape::{escape_radius, example1_escape_pair, trap_escape_probability_bound, TrapParams, ESCAPE_GUARD};
pub use greedy::{best_greedy_gain, greedy_max_coverage, greedy_set_cover};
pub use metrics::{approximation_ratio, qd_metrics, QdMetrics};
pub use oracle::{brute_force_opt, OracleResult, ENUMERATION_GUARD};
pub use submodularity::{gamma_min, submodularity_ratio, TabulatedSetFunction, TABULATION_GUARD};

/// `C(n, k)` as a float; exact for the magnitudes used here.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Calls `visit` with every `d`-subset of `0..n` in lexicographic order;
/// stops early when `visit` returns true. Returns whether it stopped early.
pub(crate) fn for_each_combination(n: usize, d: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if d > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        if visit(&idx) {
            return true;
        }
        // advance to the next combination
        let mut i = d;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < n - d + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_complete() {
        for n in 0..8 {
            for d in 0..=n {
                let mut count = 0;
                for_each_combination(n, d, |c| {
                    assert!(c.windows(2).all(|w| w[0] < w[1]));
                    count += 1;
                    false
                });
                assert_eq!(count as f64, binomial(n, d));
            }
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(22, 7), 170_544.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }
}
