//! Objective functions, optimization direction, and behavior descriptors.
//!
//! Two problem classes are provided:
//!
//! * [`SizeConstrainedSubmodularProblem`]: maximize a monotone set function
//!   subject to `|x| <= k`, reformulated as unconstrained maximization by
//!   scoring every oversized solution `-1`. The descriptor is `|x|`, giving
//!   `n + 1` cells.
//! * [`SetCoverProblem`]: minimize `w(x) + lambda * (m - c(x))`, where `c(x)`
//!   counts covered elements. The descriptor is `c(x)`, giving `m + 1` cells.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solution::Solution;

/// Largest integer magnitude an `f64` represents exactly.
pub const EXACT_LIMIT: u128 = 1 << 53;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    /// Strict improvement of `a` over `b`.
    #[inline]
    pub fn better(self, a: Fitness, b: Fitness) -> bool {
        match self {
            Direction::Maximize => a > b,
            Direction::Minimize => a < b,
        }
    }

    #[inline]
    pub fn at_least_as_good(self, a: Fitness, b: Fitness) -> bool {
        a == b || self.better(a, b)
    }

    /// Orders fitness values so that the best compares greatest.
    pub fn rank(self, a: Fitness, b: Fitness) -> Ordering {
        match self {
            Direction::Maximize => a.cmp(&b),
            Direction::Minimize => b.cmp(&a),
        }
    }
}

/// An objective value. Totally ordered via [`f64::total_cmp`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fitness(pub f64);

impl Fitness {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl PartialEq for Fitness {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}

impl Eq for Fitness {}

impl PartialOrd for Fitness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fitness {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Fitness {
    fn from(v: u64) -> Self {
        Fitness(v as f64)
    }
}

/// Everything one fitness evaluation yields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub fitness: Fitness,
    /// Behavior-descriptor cell, in `0..cell_count()`.
    pub cell: usize,
    pub feasible: bool,
}

/// A pseudo-Boolean optimization problem with a scalar integer descriptor.
pub trait Problem: Sync {
    /// Solution length `n`.
    fn dimension(&self) -> usize;

    fn direction(&self) -> Direction;

    /// Number of behavior cells `D + 1`; descriptors lie in `0..=D`.
    fn cell_count(&self) -> usize;

    /// Evaluates fitness, descriptor, and feasibility in one pass.
    fn assess(&self, x: &Solution) -> Result<Evaluation>;

    fn evaluate(&self, x: &Solution) -> Result<Fitness> {
        Ok(self.assess(x)?.fitness)
    }

    fn descriptor(&self, x: &Solution) -> Result<usize> {
        Ok(self.assess(x)?.cell)
    }

    fn is_feasible(&self, x: &Solution) -> Result<bool> {
        Ok(self.assess(x)?.feasible)
    }
}

/// A set function over `n` ground items, evaluated on indicator vectors.
pub trait SetFunction: Sync {
    fn ground_size(&self) -> usize;

    /// `f(X)` for the subset whose indicator is `x`. `x.len()` must equal
    /// `ground_size()`.
    fn value(&self, x: &Solution) -> f64;
}

pub(crate) fn check_len(x: &Solution, n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::Contract(format!(
            "solution has length {}, problem dimension is {n}",
            x.len()
        )));
    }
    Ok(())
}

/// Distinct elements covered by the selected sets, computed directly from
/// the element lists.
///
/// `x.len()` must equal `sets.len()`; indices `>= m_elements` are ignored.
pub fn coverage_count(x: &Solution, sets: &[Vec<usize>], m_elements: usize) -> usize {
    assert_eq!(x.len(), sets.len(), "solution length must equal number of sets");
    let mut seen = vec![false; m_elements];
    let mut count = 0;
    for i in x.iter_ones() {
        for &e in &sets[i] {
            if e < m_elements && !seen[e] {
                seen[e] = true;
                count += 1;
            }
        }
    }
    count
}

/// Per-set element bitmasks for fast union counting.
#[derive(Clone, Debug)]
struct CoverageIndex {
    words: usize,
    masks: Vec<u64>,
}

impl CoverageIndex {
    fn build(sets: &[Vec<usize>], m_elements: usize) -> Self {
        let words = m_elements.div_ceil(64).max(1);
        let mut masks = vec![0u64; words * sets.len()];
        for (i, set) in sets.iter().enumerate() {
            for &e in set {
                masks[i * words + e / 64] |= 1 << (e % 64);
            }
        }
        CoverageIndex { words, masks }
    }

    fn count(&self, x: &Solution) -> usize {
        let mut acc = [0u64; 32];
        if self.words <= acc.len() {
            let acc = &mut acc[..self.words];
            for i in x.iter_ones() {
                let m = &self.masks[i * self.words..(i + 1) * self.words];
                for (a, b) in acc.iter_mut().zip(m) {
                    *a |= b;
                }
            }
            acc.iter().map(|w| w.count_ones() as usize).sum()
        } else {
            let mut acc = vec![0u64; self.words];
            for i in x.iter_ones() {
                let m = &self.masks[i * self.words..(i + 1) * self.words];
                for (a, b) in acc.iter_mut().zip(m) {
                    *a |= b;
                }
            }
            acc.iter().map(|w| w.count_ones() as usize).sum()
        }
    }
}

fn validate_sets(sets: &[Vec<usize>], m_elements: usize) -> Result<()> {
    if sets.is_empty() {
        return Err(Error::Validation("instance needs at least one set".into()));
    }
    for (i, set) in sets.iter().enumerate() {
        let mut seen = std::collections::BTreeSet::new();
        for &e in set {
            if e >= m_elements {
                return Err(Error::Validation(format!(
                    "set {i} contains element {e}, but m_elements is {m_elements}"
                )));
            }
            if !seen.insert(e) {
                return Err(Error::Validation(format!("set {i} lists element {e} twice")));
            }
        }
    }
    Ok(())
}

/// Maximum coverage: pick at most `k` of the `n` sets to cover as many
/// elements as possible.
#[derive(Clone)]
pub struct MaxCoverageInstance {
    m_elements: usize,
    sets: Vec<Vec<usize>>,
    k: usize,
    index: CoverageIndex,
}

impl MaxCoverageInstance {
    pub fn new(m_elements: usize, sets: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        validate_sets(&sets, m_elements)?;
        if k == 0 || k > sets.len() {
            return Err(Error::Validation(format!(
                "budget k must satisfy 1 <= k <= n = {}, got {k}",
                sets.len()
            )));
        }
        let index = CoverageIndex::build(&sets, m_elements);
        Ok(MaxCoverageInstance {
            m_elements,
            sets,
            k,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn m_elements(&self) -> usize {
        self.m_elements
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `c(x)` without a length check.
    pub(crate) fn covered(&self, x: &Solution) -> usize {
        self.index.count(x)
    }
}

impl PartialEq for MaxCoverageInstance {
    fn eq(&self, other: &Self) -> bool {
        self.m_elements == other.m_elements && self.sets == other.sets && self.k == other.k
    }
}

impl Eq for MaxCoverageInstance {}

impl fmt::Debug for MaxCoverageInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MaxCoverageInstance")
            .field("n", &self.n())
            .field("m_elements", &self.m_elements)
            .field("k", &self.k)
            .field("sets", &self.sets)
            .finish()
    }
}

impl SetFunction for MaxCoverageInstance {
    fn ground_size(&self) -> usize {
        self.n()
    }

    fn value(&self, x: &Solution) -> f64 {
        self.covered(x) as f64
    }
}

/// Weighted set cover with the penalty reformulation.
#[derive(Clone)]
pub struct SetCoverInstance {
    m_elements: usize,
    sets: Vec<Vec<usize>>,
    weights: Vec<u64>,
    lambda: u64,
    index: CoverageIndex,
}

impl SetCoverInstance {
    /// Validates and builds an instance. `lambda = None` selects the
    /// smallest admissible penalty, `n * w_max + 1`.
    pub fn new(
        m_elements: usize,
        sets: Vec<Vec<usize>>,
        weights: Vec<u64>,
        lambda: Option<u64>,
    ) -> Result<Self> {
        validate_sets(&sets, m_elements)?;
        let n = sets.len();
        if weights.len() != n {
            return Err(Error::Validation(format!(
                "{} weights given for {n} sets",
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::Validation(format!("weight of set {i} must be >= 1")));
        }
        let w_max = *weights.iter().max().expect("n >= 1");
        let bound = n as u128 * w_max as u128;
        let lambda = match lambda {
            Some(l) => l as u128,
            None => bound + 1,
        };
        if lambda <= bound {
            return Err(Error::Validation(format!(
                "penalty lambda = {lambda} must exceed n * w_max = {bound}"
            )));
        }
        if lambda * m_elements as u128 + bound >= EXACT_LIMIT {
            return Err(Error::Validation(format!(
                "lambda * m + n * w_max = {} reaches 2^53; fitness would not be exact",
                lambda * m_elements as u128 + bound
            )));
        }
        let index = CoverageIndex::build(&sets, m_elements);
        let all = Solution::ones(n);
        if index.count(&all) != m_elements {
            return Err(Error::Validation(format!(
                "the sets cover only {} of {m_elements} elements; instance is not coverable",
                index.count(&all)
            )));
        }
        Ok(SetCoverInstance {
            m_elements,
            sets,
            weights,
            lambda: lambda as u64,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn m_elements(&self) -> usize {
        self.m_elements
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn w_max(&self) -> u64 {
        *self.weights.iter().max().expect("n >= 1")
    }

    pub fn w_min(&self) -> u64 {
        *self.weights.iter().min().expect("n >= 1")
    }

    /// `w(x)`, the total weight of the selected sets.
    pub fn weight(&self, x: &Solution) -> u64 {
        x.iter_ones().map(|i| self.weights[i]).sum()
    }

    pub(crate) fn covered(&self, x: &Solution) -> usize {
        self.index.count(x)
    }
}

impl PartialEq for SetCoverInstance {
    fn eq(&self, other: &Self) -> bool {
        self.m_elements == other.m_elements
            && self.sets == other.sets
            && self.weights == other.weights
            && self.lambda == other.lambda
    }
}

impl Eq for SetCoverInstance {}

impl fmt::Debug for SetCoverInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetCoverInstance")
            .field("n", &self.n())
            .field("m_elements", &self.m_elements)
            .field("weights", &self.weights)
            .field("lambda", &self.lambda)
            .field("sets", &self.sets)
            .finish()
    }
}

/// Maximize a monotone set function `f` subject to `|x| <= k`.
#[derive(Clone, Debug)]
pub struct SizeConstrainedSubmodularProblem<F> {
    function: F,
    k: usize,
}

pub type MaxCoverageProblem = SizeConstrainedSubmodularProblem<MaxCoverageInstance>;

impl<F: SetFunction> SizeConstrainedSubmodularProblem<F> {
    pub fn new(function: F, k: usize) -> Result<Self> {
        if k == 0 || k > function.ground_size() {
            return Err(Error::Parameter(format!(
                "budget k must satisfy 1 <= k <= n = {}, got {k}",
                function.ground_size()
            )));
        }
        Ok(SizeConstrainedSubmodularProblem { function, k })
    }

    pub fn function(&self) -> &F {
        &self.function
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl MaxCoverageProblem {
    pub fn max_coverage(instance: MaxCoverageInstance) -> Self {
        let k = instance.k();
        SizeConstrainedSubmodularProblem { function: instance, k }
    }

    pub fn instance(&self) -> &MaxCoverageInstance {
        &self.function
    }
}

impl<F: SetFunction> Problem for SizeConstrainedSubmodularProblem<F> {
    fn dimension(&self) -> usize {
        self.function.ground_size()
    }

    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn cell_count(&self) -> usize {
        self.dimension() + 1
    }

    #[inline]
    fn assess(&self, x: &Solution) -> Result<Evaluation> {
        check_len(x, self.dimension())?;
        let ones = x.count_ones();
        let feasible = ones <= self.k;
        let fitness = if feasible {
            Fitness(self.function.value(x))
        } else {
            Fitness(-1.0)
        };
        Ok(Evaluation {
            fitness,
            cell: ones,
            feasible,
        })
    }
}

/// Set cover as unconstrained minimization of `w(x) + lambda * (m - c(x))`.
#[derive(Clone, Debug)]
pub struct SetCoverProblem {
    instance: SetCoverInstance,
}

impl SetCoverProblem {
    pub fn new(instance: SetCoverInstance) -> Self {
        SetCoverProblem { instance }
    }

    pub fn instance(&self) -> &SetCoverInstance {
        &self.instance
    }
}

impl Problem for SetCoverProblem {
    fn dimension(&self) -> usize {
        self.instance.n()
    }

    fn direction(&self) -> Direction {
        Direction::Minimize
    }

    fn cell_count(&self) -> usize {
        self.instance.m_elements() + 1
    }

    #[inline]
    fn assess(&self, x: &Solution) -> Result<Evaluation> {
        check_len(x, self.dimension())?;
        let inst = &self.instance;
        let covered = inst.covered(x);
        let uncovered = (inst.m_elements() - covered) as u64;
        let value = inst.weight(x) + inst.lambda() * uncovered;
        Ok(Evaluation {
            fitness: Fitness::from(value),
            cell: covered,
            feasible: covered == inst.m_elements(),
        })
    }
}

/// Penalized max-coverage objective: `-1` above the budget, else `c(x)`.
pub fn submodular_eval(x: &Solution, instance: &MaxCoverageInstance) -> Result<Fitness> {
    check_len(x, instance.n())?;
    if x.count_ones() > instance.k() {
        Ok(Fitness(-1.0))
    } else {
        Ok(Fitness::from(instance.covered(x) as u64))
    }
}

/// `|x|`.
pub fn submodular_descriptor(x: &Solution) -> usize {
    x.count_ones()
}

pub fn set_cover_eval(x: &Solution, instance: &SetCoverInstance) -> Result<Fitness> {
    SetCoverProblem::new(instance.clone()).evaluate(x)
}

/// `c(x)`.
pub fn set_cover_descriptor(x: &Solution, instance: &SetCoverInstance) -> Result<usize> {
    check_len(x, instance.n())?;
    Ok(instance.covered(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sol(s: &str) -> Solution {
        s.parse().unwrap()
    }

    // star instance at n = 5, spelled out by hand
    fn star5() -> SetCoverInstance {
        SetCoverInstance::new(
            4,
            vec![vec![0, 1, 2, 3], vec![0], vec![1], vec![2], vec![3]],
            vec![32, 1, 1, 1, 1],
            None,
        )
        .unwrap()
    }

    #[test]
    fn direction_comparisons() {
        let (a, b) = (Fitness(3.0), Fitness(5.0));
        assert!(Direction::Maximize.better(b, a));
        assert!(Direction::Minimize.better(a, b));
        assert!(!Direction::Maximize.better(a, a));
        assert!(Direction::Minimize.at_least_as_good(a, a));
    }

    #[test]
    fn coverage_count_examples() {
        let inst = star5();
        assert_eq!(coverage_count(&sol("10000"), inst.sets(), 4), 4);
        assert_eq!(coverage_count(&sol("00000"), inst.sets(), 4), 0);
        assert_eq!(coverage_count(&sol("01100"), inst.sets(), 4), 2);
    }

    #[test]
    fn set_cover_eval_examples() {
        let inst = star5();
        assert_eq!(inst.lambda(), 161);
        assert_eq!(set_cover_eval(&sol("01111"), &inst).unwrap(), Fitness(4.0));
        assert_eq!(set_cover_eval(&sol("10000"), &inst).unwrap(), Fitness(32.0));
        assert_eq!(set_cover_eval(&sol("00000"), &inst).unwrap(), Fitness(644.0));
        assert!(set_cover_eval(&sol("0000"), &inst).is_err());
    }

    #[test]
    fn set_cover_descriptor_examples() {
        let inst = star5();
        assert_eq!(set_cover_descriptor(&sol("00000"), &inst).unwrap(), 0);
        assert_eq!(set_cover_descriptor(&sol("10000"), &inst).unwrap(), 4);
        assert_eq!(set_cover_descriptor(&sol("01010"), &inst).unwrap(), 2);
        let p = SetCoverProblem::new(inst);
        assert_eq!(p.cell_count(), 5);
        assert!(p.is_feasible(&sol("01111")).unwrap());
        assert!(!p.is_feasible(&sol("01110")).unwrap());
    }

    #[test]
    fn submodular_descriptor_examples() {
        assert_eq!(submodular_descriptor(&Solution::zeros(7)), 0);
        assert_eq!(submodular_descriptor(&Solution::ones(7)), 7);
        assert_eq!(submodular_descriptor(&sol("10110")), 3);
    }

    #[test]
    fn oversized_solutions_score_minus_one() {
        let inst = MaxCoverageInstance::new(3, vec![vec![0], vec![1], vec![2]], 2).unwrap();
        assert_eq!(submodular_eval(&sol("110"), &inst).unwrap(), Fitness(2.0));
        assert_eq!(submodular_eval(&sol("111"), &inst).unwrap(), Fitness(-1.0));
        assert_eq!(submodular_eval(&sol("000"), &inst).unwrap(), Fitness(0.0));
        let p = MaxCoverageProblem::max_coverage(inst);
        assert!(!p.is_feasible(&sol("111")).unwrap());
        assert_eq!(p.cell_count(), 4);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            MaxCoverageInstance::new(2, vec![vec![0, 2]], 1),
            Err(Error::Validation(_))
        ));
        assert!(MaxCoverageInstance::new(2, vec![vec![0]], 0).is_err());
        assert!(MaxCoverageInstance::new(2, vec![vec![0, 0]], 1).is_err());
        // lambda bound
        let e = SetCoverInstance::new(1, vec![vec![0], vec![0]], vec![3, 1], Some(6)).unwrap_err();
        assert!(e.to_string().contains("lambda"), "{e}");
        // not coverable
        assert!(SetCoverInstance::new(3, vec![vec![0], vec![1]], vec![1, 1], None).is_err());
        // zero weight
        assert!(SetCoverInstance::new(1, vec![vec![0]], vec![0], None).is_err());
        // overflow guard
        assert!(SetCoverInstance::new(1, vec![vec![0]], vec![1 << 52], None).is_err());
    }

    #[test]
    fn fast_and_direct_coverage_agree_across_word_boundaries() {
        let m = 3000;
        let sets: Vec<Vec<usize>> = (0..10).map(|i| (i * 250..i * 250 + 400).collect()).collect();
        let inst = MaxCoverageInstance::new(m, sets, 10).unwrap();
        let x = sol("1010010011");
        assert_eq!(inst.covered(&x), coverage_count(&x, inst.sets(), m));
    }

    fn small_instance() -> impl Strategy<Value = MaxCoverageInstance> {
        (1usize..=8, 1usize..=10).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::btree_set(0..m, 0..=m), n).prop_map(
                move |sets| {
                    let sets = sets.into_iter().map(|s| s.into_iter().collect()).collect();
                    MaxCoverageInstance::new(m, sets, n).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn coverage_is_monotone_and_submodular(inst in small_instance(), a in any::<u64>(), b in any::<u64>(), v in 0usize..8) {
            let n = inst.n();
            let v = v % n;
            let x = Solution::from_code(n, a & b);
            let y = Solution::from_code(n, a);
            prop_assert!(x.is_subset_of(&y));
            let f = |s: &Solution| inst.value(s);
            prop_assert!(f(&x) <= f(&y));
            if !y.get(v) {
                let mut xv = x.clone();
                xv.set(v, true);
                let mut yv = y.clone();
                yv.set(v, true);
                prop_assert!(f(&xv) - f(&x) >= f(&yv) - f(&y));
            }
        }

        #[test]
        fn bitset_coverage_matches_direct_count(inst in small_instance(), code in any::<u64>()) {
            let x = Solution::from_code(inst.n(), code);
            prop_assert_eq!(inst.covered(&x), coverage_count(&x, inst.sets(), inst.m_elements()));
        }
    }
}
