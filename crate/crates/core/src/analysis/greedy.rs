use crate::error::{Error, Result};
use crate::problems::{check_len, MaxCoverageInstance, SetCoverInstance, SetFunction};
use crate::solution::Solution;

/// The item outside `x` with the largest marginal gain `f(x + v) - f(x)`,
/// and that gain. Ties go to the lowest index.
pub fn best_greedy_gain<F: SetFunction + ?Sized>(x: &Solution, f: &F) -> Result<(usize, f64)> {
    check_len(x, f.ground_size())?;
    let base = f.value(x);
    let mut best: Option<(usize, f64)> = None;
    let mut y = x.clone();
    for i in 0..x.len() {
        if x.get(i) {
            continue;
        }
        y.set(i, true);
        let gain = f.value(&y) - base;
        y.set(i, false);
        if best.is_none_or(|(_, g)| gain > g) {
            best = Some((i, gain));
        }
    }
    best.ok_or_else(|| Error::Parameter("every item is already selected".into()))
}

/// Classical greedy: `min(k, n)` rounds of adding the best marginal item.
pub fn greedy_max_coverage(instance: &MaxCoverageInstance) -> Solution {
    let mut x = Solution::zeros(instance.n());
    for _ in 0..instance.k().min(instance.n()) {
        let (i, _) = best_greedy_gain(&x, instance).expect("fewer than n items chosen");
        x.set(i, true);
    }
    x
}

/// Chvatal's greedy: repeatedly add the set with the least weight per newly
/// covered element until everything is covered. Ratios are compared exactly;
/// ties go to the lowest index.
pub fn greedy_set_cover(instance: &SetCoverInstance) -> Solution {
    let n = instance.n();
    let mut x = Solution::zeros(n);
    let mut covered = vec![false; instance.m_elements()];
    let mut remaining = instance.m_elements();
    while remaining > 0 {
        let mut best: Option<(usize, u64, u64)> = None;
        for i in (0..n).filter(|&i| !x.get(i)) {
            let fresh = instance.sets()[i].iter().filter(|&&e| !covered[e]).count() as u64;
            if fresh == 0 {
                continue;
            }
            let w = instance.weights()[i];
            // w / fresh < bw / bfresh
            if best.is_none_or(|(_, bw, bf)| (w as u128) * (bf as u128) < (bw as u128) * (fresh as u128)) {
                best = Some((i, w, fresh));
            }
        }
        let (i, _, fresh) = best.expect("instance is coverable");
        x.set(i, true);
        for &e in &instance.sets()[i] {
            covered[e] = true;
        }
        remaining -= fresh as usize;
    }
    x
}
