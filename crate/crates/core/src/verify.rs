//! The built-in acceptance suite: seven checks with fixed seeds and
//! thresholds, shared by the `acceptance` test target and `qdsep verify`.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

use crate::algorithms::{
    ea_init, map_elites_init, map_elites_step, mu_plus_one_step, run_map_elites, Acceptance, Placement, RunConfig,
};
use crate::analysis::{
    approximation_ratio, best_greedy_gain, brute_force_opt, escape_radius, greedy_max_coverage, greedy_set_cover,
    submodularity_ratio, trap_escape_probability_bound, TabulatedSetFunction, TrapParams,
};
use crate::error::Result;
use crate::harness::{run_experiment, Algorithm, Budget, ExperimentConfig, ProblemSpec, SeedPopulation, TargetLevel, TargetSpec};
use crate::instances::{
    example1_max_coverage, example2_set_cover, random_max_coverage, random_set_cover, Example1Params, Example2Params,
};
use crate::mutation::sample_flip_mask;
use crate::problems::{
    Direction, Fitness, MaxCoverageInstance, MaxCoverageProblem, Problem, SetCoverInstance, SetCoverProblem, SetFunction,
};
use crate::rng::RandomSource;
use crate::solution::Solution;

const SEED: u64 = 20_240_601;

type Check = fn() -> Result<(bool, String)>;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub time_limit: Duration,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {} ({}): {} [{:.1}s of {}s]",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.time_limit.as_secs()
        )
    }
}

pub const CRITERIA: [u8; 7] = [1, 2, 3, 4, 5, 6, 7];

/// Runs one criterion. Errors inside a check become a failed outcome.
pub fn run_criterion(criterion: u8) -> Option<CheckOutcome> {
    let (name, limit, check): (&str, u64, Check) = match criterion {
        1 => ("oracle equivalence", 60, oracle_equivalence),
        2 => ("max-coverage approximation", 300, max_coverage_approximation),
        3 => ("set-cover approximation", 120, set_cover_approximation),
        4 => ("max-coverage trap", 300, max_coverage_trap),
        5 => ("set-cover trap", 120, set_cover_trap),
        6 => ("head-to-head separation", 600, head_to_head),
        7 => ("invariant suites", 120, invariant_suites),
        _ => return None,
    };
    let start = Instant::now();
    let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
    let elapsed = start.elapsed();
    let time_limit = Duration::from_secs(limit);
    let within = elapsed < time_limit;
    Some(CheckOutcome {
        criterion,
        name,
        passed: ok && within,
        detail: if within { detail } else { format!("{detail}; over time limit") },
        elapsed,
        time_limit,
    })
}

pub fn run_all() -> Vec<CheckOutcome> {
    CRITERIA.iter().filter_map(|&c| run_criterion(c)).collect()
}

fn reverse_order_solution(code: u64, n: usize) -> Solution {
    let bits: Vec<bool> = (0..n).map(|i| code >> (n - 1 - i) & 1 == 1).collect();
    Solution::from_bits(&bits)
}

fn covered_set(x: &Solution, sets: &[Vec<usize>]) -> HashSet<usize> {
    x.iter_ones().flat_map(|i| sets[i].iter().copied()).collect()
}

/// Maximum of coverage over `|x| <= k`, enumerated independently of the
/// library's problem types.
fn reenumerate_max_coverage(inst: &MaxCoverageInstance) -> f64 {
    let n = inst.n();
    (0..1u64 << n)
        .map(|c| reverse_order_solution(c, n))
        .filter(|x| x.count_ones() <= inst.k())
        .map(|x| covered_set(&x, inst.sets()).len() as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Minimum weight over full covers.
fn reenumerate_set_cover(inst: &SetCoverInstance) -> f64 {
    let n = inst.n();
    (0..1u64 << n)
        .map(|c| reverse_order_solution(c, n))
        .filter(|x| covered_set(x, inst.sets()).len() == inst.m_elements())
        .map(|x| x.iter_ones().map(|i| inst.weights()[i]).sum::<u64>() as f64)
        .fold(f64::INFINITY, f64::min)
}

fn oracle_equivalence() -> Result<(bool, String)> {
    let mut rng = RandomSource::new(SEED);
    let mut worst_mc = f64::INFINITY;
    let mut worst_sc = 0.0f64;
    let mut mismatches = 0;
    let mut guarantee_failures = 0;
    for _ in 0..20 {
        let n = 8 + rng.below(7);
        let m = 8 + rng.below(13);
        let k = 1 + rng.below(n / 2);
        let inst = random_max_coverage(n, m, 0.25, k, &mut rng)?;
        let oracle = brute_force_opt(&MaxCoverageProblem::max_coverage(inst.clone()))?;
        if oracle.opt.value() != reenumerate_max_coverage(&inst) {
            mismatches += 1;
        }
        let g = greedy_max_coverage(&inst);
        let ratio = inst.value(&g) / oracle.opt.value();
        worst_mc = worst_mc.min(ratio);
        if ratio < 1.0 - (-1.0f64).exp() {
            guarantee_failures += 1;
        }
    }
    for _ in 0..20 {
        let n = 8 + rng.below(7);
        let m = 6 + rng.below(10);
        let inst = random_set_cover(n, m, 0.25, 9, &mut rng)?;
        let oracle = brute_force_opt(&SetCoverProblem::new(inst.clone()))?;
        if oracle.opt.value() != reenumerate_set_cover(&inst) {
            mismatches += 1;
        }
        let g = greedy_set_cover(&inst);
        let ratio = inst.weight(&g) as f64 / oracle.opt.value();
        worst_sc = worst_sc.max(ratio);
        if ratio > (m as f64).ln() + 1.0 {
            guarantee_failures += 1;
        }
    }
    Ok((
        mismatches == 0 && guarantee_failures == 0,
        format!(
            "40 instances, {mismatches} OPT mismatches, {guarantee_failures} greedy guarantee failures; \
             worst greedy ratios {worst_mc:.4} (max coverage), {worst_sc:.4} (set cover)"
        ),
    ))
}

fn example1_30() -> Example1Params {
    Example1Params::new(30, 1, 10).expect("valid parameters")
}

fn max_coverage_approximation() -> Result<(bool, String)> {
    let p = example1_30();
    let threshold = ((1.0 - (-1.0f64).exp()) * p.optimum_value() as f64).ceil();
    let mut config = ExperimentConfig::new(
        ProblemSpec::Example1(p),
        Algorithm::MapElites,
        Budget::Bound { multiplier: 20.0 },
        50,
    );
    config.master_seed = SEED;
    config.target = Some(TargetSpec {
        level: TargetLevel::Fitness(threshold),
        cell: Some(p.k()),
        require_feasible: true,
    });
    let r = run_experiment(&config)?;
    let s = r.aggregate.successes;
    Ok((
        s >= 45,
        format!(
            "{s}/50 trials reached f >= {threshold} in cell {} within {} evaluations (median first hit {:.0})",
            p.k(),
            r.budget,
            r.aggregate.median_first_hit.unwrap_or(f64::NAN)
        ),
    ))
}

fn set_cover_approximation() -> Result<(bool, String)> {
    let p = Example2Params::new(12)?;
    let m = p.m() as f64;
    let threshold = ((m.ln() + 1.0) * p.optimum_value() as f64).floor();
    let mut config = ExperimentConfig::new(
        ProblemSpec::Example2(p),
        Algorithm::MapElites,
        Budget::Bound { multiplier: 20.0 },
        50,
    );
    config.master_seed = SEED;
    config.target = Some(TargetSpec {
        level: TargetLevel::Fitness(threshold),
        cell: None,
        require_feasible: true,
    });
    let r = run_experiment(&config)?;
    let s = r.aggregate.successes;
    Ok((
        s >= 45,
        format!(
            "{s}/50 trials found a full cover of weight <= {threshold} within {} evaluations",
            r.budget
        ),
    ))
}

fn seeded_trap(spec: ProblemSpec) -> Result<(usize, u64)> {
    let mut config = ExperimentConfig::new(spec, Algorithm::Ea, Budget::Evaluations(1_000_000), 20);
    config.master_seed = SEED;
    config.seed_population = Some(SeedPopulation::Local);
    let r = run_experiment(&config)?;
    let escaped = r.trials.iter().filter(|t| t.improvements_after_init > 0).count();
    let evaluations = r.trials.iter().map(|t| t.evaluations_used).sum();
    Ok((escaped, evaluations))
}

fn max_coverage_trap() -> Result<(bool, String)> {
    let p60 = Example1Params::new(60, 1, 10)?;
    let bound = trap_escape_probability_bound(&TrapParams::Example1(p60))?;
    let (escaped, evals) = seeded_trap(ProblemSpec::Example1(p60))?;
    let p9 = Example1Params::new(9, 1, 3)?;
    let mc9 = MaxCoverageProblem::max_coverage(example1_max_coverage(&p9)?);
    let radius = escape_radius(&p9.local_optimum(), &mc9)?;
    Ok((
        escaped == 0 && bound < 1e-12 && radius == 8,
        format!(
            "{escaped}/20 trials improved over {evals} evaluations; escape bound {bound:.3e} per offspring; \
             n=9 escape radius {radius}"
        ),
    ))
}

fn set_cover_trap() -> Result<(bool, String)> {
    let p = Example2Params::new(12)?;
    let bound = trap_escape_probability_bound(&TrapParams::Example2(p))?;
    let (escaped, evals) = seeded_trap(ProblemSpec::Example2(p))?;
    let mut radii_ok = true;
    for n in 4..=10 {
        let q = Example2Params::new(n)?;
        let sc = SetCoverProblem::new(example2_set_cover(&q)?);
        radii_ok &= escape_radius(&q.local_optimum(), &sc)? == n;
    }
    let sc = SetCoverProblem::new(example2_set_cover(&p)?);
    let trapped = sc.evaluate(&p.local_optimum())?;
    let ratio = approximation_ratio(trapped, Fitness::from(p.optimum_value()), Direction::Minimize)?;
    let m = p.m() as f64;
    let expected = 2f64.powi(p.m() as i32 + 1) / m;
    Ok((
        escaped == 0 && radii_ok && ratio == expected,
        format!(
            "{escaped}/20 trials improved over {evals} evaluations; escape probability {bound:.3e}; \
             radii n for n in 4..=10: {radii_ok}; trapped ratio {ratio} (2^(m+1)/m = {expected})"
        ),
    ))
}

fn head_to_head() -> Result<(bool, String)> {
    let p = example1_30();
    let run = |algorithm| {
        let mut c = ExperimentConfig::new(ProblemSpec::Example1(p), algorithm, Budget::Evaluations(260_000), 50);
        c.master_seed = SEED;
        c.target = Some(TargetSpec {
            level: TargetLevel::Ratio(0.95),
            cell: None,
            require_feasible: true,
        });
        run_experiment(&c)
    };
    let me = run(Algorithm::MapElites)?;
    let ea = run(Algorithm::Ea)?;
    let opt = p.optimum_value() as f64;
    let trap_line = (1.0 + p.delta()) / (2.0 - p.delta()) + 0.01;
    let mut entered = 0;
    let mut escaped = 0;
    for t in &ea.trials {
        if let Some(pos) = t.improvement_log.iter().position(|i| p.is_local_optimum(&i.solution)) {
            entered += 1;
            if t.improvement_log[pos..].iter().any(|i| i.fitness.value() / opt > trap_line) {
                escaped += 1;
            }
        }
    }
    let me_median = me.aggregate.median_ratio.unwrap_or(0.0);
    let (ms, es) = (me.aggregate.successes, ea.aggregate.successes);
    Ok((
        me_median >= 0.95 && ms > es,
        format!(
            "MAP-Elites median ratio {me_median:.4}, {ms}/50 reach 0.95; EA {es}/50 reach 0.95, \
             {entered} entered the local-optimum basin, {escaped} of those later passed ratio {trap_line:.4}"
        ),
    ))
}

fn invariant_suites() -> Result<(bool, String)> {
    let mut failures: Vec<String> = Vec::new();
    let mut rng = RandomSource::new(SEED);

    for trial in 0..20 {
        let n = 10 + rng.below(11);
        let k = 1 + rng.below(n);
        let mc = MaxCoverageProblem::max_coverage(random_max_coverage(n, 25, 0.2, k, &mut rng)?);
        let sc = SetCoverProblem::new(random_set_cover(n, 15, 0.2, 20, &mut rng)?);
        archive_invariants(&mc, &mut rng, &mut failures, trial)?;
        archive_invariants(&sc, &mut rng, &mut failures, trial)?;
        population_invariants(&mc, &mut rng, &mut failures, trial)?;
        population_invariants(&sc, &mut rng, &mut failures, trial)?;
        let budget = 500 + rng.below(500) as u64;
        let t = run_map_elites(&mc, &RunConfig::new(budget, n + 1, trial as u64))?;
        if t.evaluations_used != budget || t.steps != budget - (n as u64 + 1) {
            failures.push(format!("evaluation conservation, run {trial}"));
        }
    }

    let mut stats = Vec::new();
    for n in [5usize, 30] {
        let (stat, critical) = mutation_chi_square(n, 100_000, &mut rng);
        stats.push(format!("n={n}: X2={stat:.2} < {critical:.2}"));
        if stat >= critical {
            failures.push(format!("mutation flip-count distribution, n={n}, X2={stat:.2}"));
        }
    }

    for _ in 0..10 {
        let n = 4 + rng.below(7);
        let inst = random_max_coverage(n, 12, 0.3, 1, &mut rng)?;
        let table = TabulatedSetFunction::from_function(&inst)?;
        for _ in 0..5 {
            let x = rng.uniform_solution(n);
            let l = 1 + rng.below(n);
            if submodularity_ratio(&table, &x, l)? != 1.0 {
                failures.push(format!("submodularity ratio on coverage, n={n}"));
            }
        }
    }

    let mut gain_checked = 0;
    while gain_checked < 100 {
        let n = 5 + rng.below(5);
        let k = 1 + rng.below(n);
        let inst = random_max_coverage(n, 12, 0.3, k, &mut rng)?;
        let opt = brute_force_opt(&MaxCoverageProblem::max_coverage(inst.clone()))?.opt.value();
        let table = TabulatedSetFunction::from_function(&inst)?;
        let x = rng.uniform_solution(n);
        if x.count_ones() == n {
            continue;
        }
        let gamma = submodularity_ratio(&table, &x, k)?;
        let (_, gain) = best_greedy_gain(&x, &inst)?;
        if gain < gamma / k as f64 * (opt - inst.value(&x)) - 1e-9 {
            failures.push(format!("greedy gain inequality at {x}"));
        }
        gain_checked += 1;
    }

    let passed = failures.is_empty();
    Ok((
        passed,
        if passed {
            format!(
                "archive, population, conservation, descriptor, submodularity and gain checks clean; {}",
                stats.join(", ")
            )
        } else {
            format!("{} failures, first: {}", failures.len(), failures[0])
        },
    ))
}

fn archive_invariants<P: Problem>(
    problem: &P,
    rng: &mut RandomSource,
    failures: &mut Vec<String>,
    trial: usize,
) -> Result<()> {
    let dir = problem.direction();
    let initial = problem.cell_count();
    let mut archive = map_elites_init(problem, initial, rng, Acceptance::Strict)?;
    for step in 0..2000u64 {
        let prev: Vec<Option<Fitness>> = (0..archive.cell_count()).map(|c| archive.get(c).map(|e| e.fitness)).collect();
        let out = map_elites_step(&mut archive, problem, rng, Acceptance::Strict)?;
        for (c, old) in prev.iter().enumerate() {
            match (old, archive.get(c)) {
                (Some(_), None) => failures.push(format!("archive cell {c} emptied, run {trial}")),
                (Some(o), Some(e)) if dir.better(*o, e.fitness) => {
                    failures.push(format!("archive cell {c} worsened, run {trial}"))
                }
                _ => {}
            }
        }
        if matches!(out.placement, Placement::Filled | Placement::Replaced(_))
            && archive.get(out.evaluation.cell).map(|e| &e.solution) != Some(&out.offspring)
        {
            failures.push(format!("accepted offspring missing, run {trial}"));
        }
        if archive.evaluations() != initial as u64 + step + 1 {
            failures.push(format!("archive evaluation count, run {trial}"));
        }
    }
    for (c, e) in archive.iter() {
        if problem.descriptor(&e.solution)? != c || e.cell != c {
            failures.push(format!("descriptor coherence in cell {c}, run {trial}"));
        }
    }
    Ok(())
}

fn population_invariants<P: Problem>(
    problem: &P,
    rng: &mut RandomSource,
    failures: &mut Vec<String>,
    trial: usize,
) -> Result<()> {
    let mu = problem.cell_count();
    let mut pop = ea_init(problem, mu, rng)?;
    let mut worst = pop.worst_fitness(problem);
    for step in 0..2000u64 {
        mu_plus_one_step(&mut pop, problem, rng, Acceptance::Strict)?;
        let now = pop.worst_fitness(problem);
        if problem.direction().better(worst, now) {
            failures.push(format!("population worst fitness regressed, run {trial}"));
        }
        worst = now;
        if pop.size() != mu || pop.evaluations() != mu as u64 + step + 1 {
            failures.push(format!("population size or evaluation count, run {trial}"));
        }
    }
    Ok(())
}

/// Pearson statistic of sampled flip counts against Binomial(n, 1/n), with
/// adjacent bins merged until every expected count is at least 5, and the
/// 0.99 quantile of the matching chi-square distribution.
fn mutation_chi_square(n: usize, samples: usize, rng: &mut RandomSource) -> (f64, f64) {
    let mut observed = vec![0u64; n + 1];
    for _ in 0..samples {
        observed[sample_flip_mask(n, rng).len()] += 1;
    }
    let binom = Binomial::new(1.0 / n as f64, n as u64).expect("valid binomial");
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut exp_acc, mut obs_acc) = (0.0, 0.0);
    for (j, &o) in observed.iter().enumerate() {
        exp_acc += samples as f64 * binom.pmf(j as u64);
        obs_acc += o as f64;
        if exp_acc >= 5.0 {
            bins.push((obs_acc, exp_acc));
            exp_acc = 0.0;
            obs_acc = 0.0;
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 += obs_acc;
        last.1 += exp_acc;
    }
    let stat = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let df = (bins.len() - 1) as f64;
    let critical = ChiSquared::new(df).expect("df >= 1").inverse_cdf(0.99);
    (stat, critical)
}
