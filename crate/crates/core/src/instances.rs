//! Instance generators and the on-disk instance format.
//!
//! Two constructed hard instances, both built from complete bipartite
//! graphs whose edges form the ground set and where each vertex owns the set
//! of its incident edges:
//!
//! * [`example1_max_coverage`]: left part of `(1+d)n/3` vertices, right part
//!   of `(2-d)n/3`, budget `k = (1+d)n/3`. Choosing every left vertex covers
//!   all edges; any `k` right vertices form a local optimum with `k^2` edges.
//! * [`example2_set_cover`]: a star on `n` vertices. The centre set costs
//!   `2^n` and covers everything; each leaf set costs 1 and covers one edge.
//!
//! Instance files are TOML documents; see `docs/instance-format.md`.

use std::fs;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{MaxCoverageInstance, SetCoverInstance};
use crate::rng::RandomSource;
use crate::solution::Solution;

pub const INSTANCE_FORMAT: &str = "qdsep-instance/1";

/// Parameters of the bipartite max-coverage trap. `delta = delta_num / delta_den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example1Params {
    pub n: usize,
    pub delta_num: u64,
    pub delta_den: u64,
}

impl Example1Params {
    pub fn new(n: usize, delta_num: u64, delta_den: u64) -> Result<Self> {
        let p = Example1Params {
            n,
            delta_num,
            delta_den,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (n, a, b) = (self.n as u64, self.delta_num, self.delta_den);
        if n == 0 || a == 0 || b == 0 {
            return Err(Error::Parameter("n, delta numerator and denominator must be positive".into()));
        }
        if 2 * a >= b {
            return Err(Error::Parameter(format!(
                "delta = {a}/{b} must be below 1/2 so that (1+delta)n/3 < (2-delta)n/3"
            )));
        }
        if (n * (b + a)) % (3 * b) != 0 {
            return Err(Error::Parameter(format!(
                "(1+delta)n/3 = {}/{} is not an integer",
                n * (b + a),
                3 * b
            )));
        }
        if (n * (2 * b - a)) % (3 * b) != 0 {
            return Err(Error::Parameter(format!(
                "(2-delta)n/3 = {}/{} is not an integer",
                n * (2 * b - a),
                3 * b
            )));
        }
        if (n * a) % b != 0 {
            return Err(Error::Parameter(format!("delta*n = {}/{b} is not an integer", n * a)));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        self.delta_num as f64 / self.delta_den as f64
    }

    /// `(1+delta)n/3`: left vertices, and the budget `k`.
    pub fn left(&self) -> usize {
        self.n * (self.delta_den + self.delta_num) as usize / (3 * self.delta_den as usize)
    }

    /// `(2-delta)n/3`.
    pub fn right(&self) -> usize {
        self.n - self.left()
    }

    pub fn k(&self) -> usize {
        self.left()
    }

    /// `delta * n`.
    pub fn delta_n(&self) -> usize {
        self.n * self.delta_num as usize / self.delta_den as usize
    }

    /// `f(x*) = left * right`.
    pub fn optimum_value(&self) -> u64 {
        (self.left() * self.right()) as u64
    }

    /// `1^left 0^right`.
    pub fn optimum(&self) -> Solution {
        Solution::from_indices(self.n, 0..self.left()).expect("in range")
    }

    /// Value of every local optimum, `left^2`.
    pub fn local_optimum_value(&self) -> u64 {
        (self.left() * self.left()) as u64
    }

    /// The canonical local optimum `0^left 1^k 0^(right-k)`.
    pub fn local_optimum(&self) -> Solution {
        let l = self.left();
        Solution::from_indices(self.n, l..2 * l).expect("in range")
    }

    /// True for `0^left y` with `|y| = k`, i.e. exactly `k` right sets.
    pub fn is_local_optimum(&self, x: &Solution) -> bool {
        x.len() == self.n && x.iter_ones().all(|i| i >= self.left()) && x.count_ones() == self.k()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example2Params {
    pub n: usize,
}

impl Example2Params {
    pub const MIN_N: usize = 3;
    pub const MAX_N: usize = 40;

    pub fn new(n: usize) -> Result<Self> {
        if !(Self::MIN_N..=Self::MAX_N).contains(&n) {
            return Err(Error::Parameter(format!(
                "set cover star needs {} <= n <= {}, got {n}",
                Self::MIN_N,
                Self::MAX_N
            )));
        }
        Ok(Example2Params { n })
    }

    /// Number of edges, `n - 1`.
    pub fn m(&self) -> usize {
        self.n - 1
    }

    pub fn optimum_value(&self) -> u64 {
        (self.n - 1) as u64
    }

    /// `0 1^(n-1)`.
    pub fn optimum(&self) -> Solution {
        Solution::from_indices(self.n, 1..self.n).expect("in range")
    }

    /// `1 0^(n-1)`, weight `2^n`.
    pub fn local_optimum(&self) -> Solution {
        Solution::from_indices(self.n, [0]).expect("in range")
    }

    pub fn local_optimum_value(&self) -> u64 {
        1 << self.n
    }
}

pub fn example1_max_coverage(p: &Example1Params) -> Result<MaxCoverageInstance> {
    p.validate()?;
    let (left, right) = (p.left(), p.right());
    let mut sets = Vec::with_capacity(p.n);
    // edge (v_i, v_j), left i and right j (0-based within parts) has index i*right + j
    for i in 0..left {
        sets.push((i * right..(i + 1) * right).collect());
    }
    for j in 0..right {
        sets.push((0..left).map(|i| i * right + j).collect());
    }
    MaxCoverageInstance::new(left * right, sets, p.k())
}

pub fn example2_set_cover(p: &Example2Params) -> Result<SetCoverInstance> {
    let p = Example2Params::new(p.n)?;
    let m = p.m();
    let mut sets = vec![(0..m).collect::<Vec<_>>()];
    sets.extend((0..m).map(|e| vec![e]));
    let mut weights = vec![1u64 << p.n];
    weights.extend(std::iter::repeat_n(1, m));
    SetCoverInstance::new(m, sets, weights, None)
}

fn random_sets(n: usize, m: usize, density: f64, rng: &mut RandomSource) -> Vec<Vec<usize>> {
    (0..n)
        .map(|_| loop {
            let s: Vec<usize> = (0..m).filter(|_| rng.chance(density)).collect();
            if !s.is_empty() {
                break s;
            }
        })
        .collect()
}

fn check_random_params(n: usize, m: usize, density: f64) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::Parameter("n and m must be positive".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Parameter(format!("density must lie in (0, 1], got {density}")));
    }
    Ok(())
}

/// Each set includes each element independently with probability `density`;
/// empty sets are redrawn.
pub fn random_max_coverage(
    n: usize,
    m: usize,
    density: f64,
    k: usize,
    rng: &mut RandomSource,
) -> Result<MaxCoverageInstance> {
    check_random_params(n, m, density)?;
    let sets = random_sets(n, m, density, rng);
    MaxCoverageInstance::new(m, sets, k)
}

/// Like [`random_max_coverage`], then every uncovered element joins a
/// uniformly chosen set so the instance is coverable. Weights are uniform
/// in `1..=max_weight`; `lambda` takes its default.
pub fn random_set_cover(
    n: usize,
    m: usize,
    density: f64,
    max_weight: u64,
    rng: &mut RandomSource,
) -> Result<SetCoverInstance> {
    check_random_params(n, m, density)?;
    if max_weight == 0 {
        return Err(Error::Parameter("max_weight must be >= 1".into()));
    }
    let mut sets = random_sets(n, m, density, rng);
    let mut covered = vec![false; m];
    for s in &sets {
        for &e in s {
            covered[e] = true;
        }
    }
    for e in (0..m).filter(|&e| !covered[e]) {
        let i = rng.below(n);
        let pos = sets[i].partition_point(|&x| x < e);
        sets[i].insert(pos, e);
    }
    let weights = (0..n).map(|_| rng.gen_range(1..=max_weight)).collect();
    SetCoverInstance::new(m, sets, weights, None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    MaxCoverage(MaxCoverageInstance),
    SetCover(SetCoverInstance),
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::MaxCoverage(i) => i.n(),
            Instance::SetCover(i) => i.n(),
        }
    }

    pub fn m_elements(&self) -> usize {
        match self {
            Instance::MaxCoverage(i) => i.m_elements(),
            Instance::SetCover(i) => i.m_elements(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::MaxCoverage(_) => "max-coverage",
            Instance::SetCover(_) => "set-cover",
        }
    }
}

/// The constructor that produced an instance, when it was one of the two
/// bipartite constructions. Lets tools recover closed-form optima.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Origin {
    Example1(Example1Params),
    Example2(Example2Params),
}

impl Origin {
    pub fn build(&self) -> Result<Instance> {
        Ok(match self {
            Origin::Example1(p) => Instance::MaxCoverage(example1_max_coverage(p)?),
            Origin::Example2(p) => Instance::SetCover(example2_set_cover(p)?),
        })
    }
}

/// An instance plus its optional provenance, as stored in a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledInstance {
    pub instance: Instance,
    pub origin: Option<Origin>,
}

impl From<Instance> for LabeledInstance {
    fn from(instance: Instance) -> Self {
        LabeledInstance {
            instance,
            origin: None,
        }
    }
}

impl LabeledInstance {
    pub fn from_origin(origin: Origin) -> Result<Self> {
        Ok(LabeledInstance {
            instance: origin.build()?,
            origin: Some(origin),
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    format: String,
    kind: String,
    n: usize,
    m_elements: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<u64>>,
    sets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<Origin>,
}

pub fn render_instance(inst: &LabeledInstance) -> String {
    let file = match &inst.instance {
        Instance::MaxCoverage(i) => InstanceFile {
            format: INSTANCE_FORMAT.into(),
            kind: "max-coverage".into(),
            n: i.n(),
            m_elements: i.m_elements(),
            k: Some(i.k()),
            lambda: None,
            weights: None,
            sets: i.sets().to_vec(),
            generator: inst.origin,
        },
        Instance::SetCover(i) => InstanceFile {
            format: INSTANCE_FORMAT.into(),
            kind: "set-cover".into(),
            n: i.n(),
            m_elements: i.m_elements(),
            k: None,
            lambda: Some(i.lambda()),
            weights: Some(i.weights().to_vec()),
            sets: i.sets().to_vec(),
            generator: inst.origin,
        },
    };
    toml::to_string(&file).expect("instance documents always serialize")
}

fn missing(field: &str, kind: &str) -> Error {
    Error::Parse {
        context: format!("field `{field}`"),
        message: format!("required for kind `{kind}`"),
    }
}

/// Parses an instance document. `source` names the input in error messages.
pub fn parse_instance(text: &str, source: &str) -> Result<LabeledInstance> {
    let file: InstanceFile = toml::from_str(text).map_err(|e| Error::toml(text, source, e))?;
    if file.format != INSTANCE_FORMAT {
        return Err(Error::Parse {
            context: format!("{source}: field `format`"),
            message: format!("unsupported format {:?}, expected {INSTANCE_FORMAT:?}", file.format),
        });
    }
    if file.sets.len() != file.n {
        return Err(Error::Validation(format!(
            "n = {} but {} sets are listed",
            file.n,
            file.sets.len()
        )));
    }
    let instance = match file.kind.as_str() {
        "max-coverage" => {
            let k = file.k.ok_or_else(|| missing("k", &file.kind))?;
            Instance::MaxCoverage(MaxCoverageInstance::new(file.m_elements, file.sets, k)?)
        }
        "set-cover" => {
            let weights = file.weights.ok_or_else(|| missing("weights", &file.kind))?;
            let lambda = file.lambda.ok_or_else(|| missing("lambda", &file.kind))?;
            Instance::SetCover(SetCoverInstance::new(file.m_elements, file.sets, weights, Some(lambda))?)
        }
        other => {
            return Err(Error::Parse {
                context: format!("{source}: field `kind`"),
                message: format!("unknown kind {other:?}, expected \"max-coverage\" or \"set-cover\""),
            })
        }
    };
    if let Some(origin) = &file.generator {
        if origin.build()? != instance {
            return Err(Error::Validation(format!(
                "sets do not match the declared generator {origin:?}"
            )));
        }
    }
    Ok(LabeledInstance {
        instance,
        origin: file.generator,
    })
}

pub fn write_instance(inst: &LabeledInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_instance(inst)).map_err(|e| Error::io(path, e))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<LabeledInstance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{
        coverage_count, set_cover_eval, submodular_eval, Fitness, MaxCoverageProblem, Problem,
        SetCoverProblem,
    };
    use proptest::prelude::*;

    fn sol(s: &str) -> Solution {
        s.parse().unwrap()
    }

    fn e1(n: usize, a: u64, b: u64) -> (Example1Params, MaxCoverageInstance) {
        let p = Example1Params::new(n, a, b).unwrap();
        let inst = example1_max_coverage(&p).unwrap();
        (p, inst)
    }

    #[test]
    fn example1_n30() {
        let (p, inst) = e1(30, 1, 10);
        assert_eq!((p.left(), p.right(), p.delta_n()), (11, 19, 3));
        assert_eq!(inst.n(), 30);
        assert_eq!(inst.m_elements(), 209);
        assert_eq!(inst.k(), 11);
        assert_eq!(inst.sets()[0].len(), 19);
        assert_eq!(inst.sets()[29].len(), 11);

        let opt = sol(&format!("{}{}", "1".repeat(11), "0".repeat(19)));
        assert_eq!(submodular_eval(&opt, &inst).unwrap(), Fitness(209.0));
        let local = sol(&format!("{}{}{}", "0".repeat(11), "1".repeat(11), "0".repeat(8)));
        assert_eq!(local, p.local_optimum());
        assert_eq!(submodular_eval(&local, &inst).unwrap(), Fitness(121.0));
        assert_eq!(submodular_eval(&Solution::zeros(30), &inst).unwrap(), Fitness(0.0));
        let twelve = sol(&format!("{}{}", "1".repeat(12), "0".repeat(18)));
        assert_eq!(submodular_eval(&twelve, &inst).unwrap(), Fitness(-1.0));
        let p = MaxCoverageProblem::max_coverage(inst);
        assert!(p.is_feasible(&opt).unwrap());
        assert!(!p.is_feasible(&twelve).unwrap());
    }

    #[test]
    fn example1_closed_forms_match_delta() {
        // f(x*) = (1+d)(2-d) n^2 / 9 and f(x_local) = (1+d)^2 n^2 / 9 at n = 30, d = 0.1
        let (p, _) = e1(30, 1, 10);
        assert!((p.optimum_value() as f64 - 1.1 * 1.9 * 100.0).abs() < 1e-9);
        assert!((p.local_optimum_value() as f64 - 1.1 * 1.1 * 100.0).abs() < 1e-9);
    }

    #[test]
    fn example1_n9() {
        let (p, inst) = e1(9, 1, 3);
        assert_eq!((p.left(), p.right()), (4, 5));
        assert_eq!(inst.m_elements(), 20);
        assert_eq!(inst.k(), 4);
        assert_eq!(inst.sets()[0].len(), 5);
        assert_eq!(inst.sets()[8].len(), 4);
    }

    #[test]
    fn example1_structure() {
        for (n, a, b) in [(9, 1, 3), (30, 1, 10), (60, 1, 10), (90, 1, 30)] {
            let (p, inst) = e1(n, a, b);
            let (l, r) = (p.left(), p.right());
            assert!(inst.sets()[..l].iter().all(|s| s.len() == r));
            assert!(inst.sets()[l..].iter().all(|s| s.len() == l));
            assert_eq!(coverage_count(&p.optimum(), inst.sets(), inst.m_elements()), l * r);
            assert!(p.is_local_optimum(&p.local_optimum()));
            assert!(!p.is_local_optimum(&p.optimum()));
        }
    }

    #[test]
    fn example1_edge_layout() {
        let (p, inst) = e1(9, 1, 3);
        // edge (v_i, v_j), 1-based i <= 4 < j, has index (i-1)*5 + (j - 4 - 1)
        for i in 1..=p.left() {
            for j in p.left() + 1..=p.n {
                let e = (i - 1) * p.right() + (j - p.left() - 1);
                assert!(inst.sets()[i - 1].contains(&e));
                assert!(inst.sets()[j - 1].contains(&e));
            }
        }
    }

    #[test]
    fn example1_rejects_bad_params() {
        let e = Example1Params::new(10, 1, 10).unwrap_err();
        assert!(e.to_string().contains("(1+delta)n/3"), "{e}");
        assert!(Example1Params::new(30, 1, 2).is_err());
        assert!(Example1Params::new(30, 0, 10).is_err());
        let e = Example1Params::new(3, 1, 1000).unwrap_err();
        assert!(matches!(e, Error::Parameter(_)));
    }

    #[test]
    fn example2_n5() {
        let p = Example2Params::new(5).unwrap();
        let inst = example2_set_cover(&p).unwrap();
        assert_eq!(inst.m_elements(), 4);
        assert_eq!(inst.weights(), &[32, 1, 1, 1, 1]);
        assert_eq!(inst.lambda(), 161);
        assert_eq!(set_cover_eval(&sol("01111"), &inst).unwrap(), Fitness(4.0));
        assert_eq!(set_cover_eval(&sol("10000"), &inst).unwrap(), Fitness(32.0));
        assert_eq!(p.optimum(), sol("01111"));
        assert_eq!(p.local_optimum(), sol("10000"));
    }

    #[test]
    fn example2_local_is_second_best() {
        let p = Example2Params::new(5).unwrap();
        let problem = SetCoverProblem::new(example2_set_cover(&p).unwrap());
        let mut all: Vec<(Fitness, u64)> = (0..32u64)
            .map(|c| (problem.evaluate(&Solution::from_code(5, c)).unwrap(), c))
            .collect();
        all.sort();
        assert_eq!(Solution::from_code(5, all[0].1), sol("01111"));
        assert_eq!(Solution::from_code(5, all[1].1), sol("10000"));
        assert!(all[1].0 < all[2].0);
    }

    #[test]
    fn example2_structure_and_range() {
        for n in 3..=40 {
            let p = Example2Params::new(n).unwrap();
            let inst = example2_set_cover(&p).unwrap();
            let m = inst.m_elements();
            assert_eq!(coverage_count(&p.local_optimum(), inst.sets(), m), m);
            assert_eq!(coverage_count(&p.optimum(), inst.sets(), m), m);
            assert_eq!(inst.lambda(), n as u64 * (1 << n) + 1);
        }
        assert!(Example2Params::new(2).is_err());
        assert!(Example2Params::new(41).is_err());
    }

    #[test]
    fn random_generation_is_seeded() {
        let a = random_max_coverage(10, 20, 0.3, 4, &mut RandomSource::new(7)).unwrap();
        let b = random_max_coverage(10, 20, 0.3, 4, &mut RandomSource::new(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.sets().iter().all(|s| !s.is_empty()));
        let c = random_set_cover(10, 20, 0.2, 9, &mut RandomSource::new(7)).unwrap();
        let d = random_set_cover(10, 20, 0.2, 9, &mut RandomSource::new(7)).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn full_density_sets_equal_universe() {
        let inst = random_max_coverage(6, 9, 1.0, 2, &mut RandomSource::new(1)).unwrap();
        assert!(inst.sets().iter().all(|s| s.len() == 9));
    }

    #[test]
    fn random_params_rejected() {
        let mut rng = RandomSource::new(0);
        assert!(random_max_coverage(5, 5, 0.0, 2, &mut rng).is_err());
        assert!(random_max_coverage(5, 5, 1.5, 2, &mut rng).is_err());
        assert!(random_max_coverage(5, 5, 0.5, 6, &mut rng).is_err());
    }

    #[test]
    fn set_cover_orders_by_coverage_first() {
        for seed in 0..6 {
            let inst = random_set_cover(10, 12, 0.3, 50, &mut RandomSource::new(seed)).unwrap();
            let problem = SetCoverProblem::new(inst.clone());
            let evals: Vec<_> = (0..1u64 << 10)
                .map(|c| problem.assess(&Solution::from_code(10, c)).unwrap())
                .collect();
            for a in &evals {
                if a.feasible {
                    // feasible => penalty term vanishes
                    assert_eq!(a.fitness.value().fract(), 0.0);
                }
                for b in &evals {
                    if a.cell > b.cell {
                        assert!(a.fitness < b.fitness);
                    }
                }
            }
            for c in 0..1u64 << 10 {
                let x = Solution::from_code(10, c);
                if problem.is_feasible(&x).unwrap() {
                    assert_eq!(problem.evaluate(&x).unwrap(), Fitness::from(inst.weight(&x)));
                }
            }
        }
    }

    #[test]
    fn example2_round_trips() {
        let li = LabeledInstance::from_origin(Origin::Example2(Example2Params::new(5).unwrap())).unwrap();
        let text = render_instance(&li);
        assert!(text.contains("format = \"qdsep-instance/1\""));
        assert_eq!(parse_instance(&text, "mem").unwrap(), li);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("star.toml");
        write_instance(&li, &path).unwrap();
        assert_eq!(read_instance(&path).unwrap(), li);
    }

    #[test]
    fn lambda_bound_enforced_on_read() {
        let text = r#"
format = "qdsep-instance/1"
kind = "set-cover"
n = 2
m_elements = 1
lambda = 6
weights = [3, 1]
sets = [[0], [0]]
"#;
        let e = parse_instance(text, "f").unwrap_err();
        assert!(matches!(e, Error::Validation(_)));
        assert!(e.to_string().contains("n * w_max"), "{e}");
    }

    #[test]
    fn element_range_enforced_on_read() {
        let text = r#"
format = "qdsep-instance/1"
kind = "max-coverage"
n = 2
m_elements = 3
k = 1
sets = [[0, 1], [3]]
"#;
        let e = parse_instance(text, "f").unwrap_err();
        assert!(matches!(e, Error::Validation(_)), "{e}");
    }

    #[test]
    fn malformed_file_reports_line() {
        let text = "format = \"qdsep-instance/1\"\nkind = \"set-cover\"\nn = two\n";
        let e = parse_instance(text, "bad.toml").unwrap_err();
        match e {
            Error::Parse { context, .. } => assert_eq!(context, "bad.toml:3"),
            other => panic!("unexpected {other:?}"),
        }
        let e = parse_instance("format = \"qdsep-instance/1\"\nkind = \"max-coverage\"\nn = 1\nm_elements = 1\nsets = [[0]]\n", "f").unwrap_err();
        assert!(e.to_string().contains("`k`"), "{e}");
    }

    #[test]
    fn generator_mismatch_rejected() {
        let mut li = LabeledInstance::from_origin(Origin::Example2(Example2Params::new(4).unwrap())).unwrap();
        li.origin = Some(Origin::Example2(Example2Params::new(5).unwrap()));
        assert!(parse_instance(&render_instance(&li), "f").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn generated_instances_round_trip(seed in any::<u64>(), n in 1usize..12, m in 1usize..15, cover in any::<bool>()) {
            let mut rng = RandomSource::new(seed);
            let inst = if cover {
                Instance::SetCover(random_set_cover(n, m, 0.3, 20, &mut rng).unwrap())
            } else {
                Instance::MaxCoverage(random_max_coverage(n, m, 0.3, 1 + n / 2, &mut rng).unwrap())
            };
            let li = LabeledInstance::from(inst);
            prop_assert_eq!(parse_instance(&render_instance(&li), "mem").unwrap(), li);
        }
    }
}
