use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{run_ea, run_ea_seeded, run_map_elites, RunConfig, RunTrace, Target};
use crate::analysis::{approximation_ratio, brute_force_opt, ENUMERATION_GUARD};
use crate::error::{Error, Result};
use crate::instances::{Instance, LabeledInstance, Origin};
use crate::problems::{Direction, Evaluation, Fitness, MaxCoverageProblem, Problem, SetCoverProblem};
use crate::solution::Solution;

use super::config::{Algorithm, ExperimentConfig, SeedPopulation, TargetLevel};
use super::report::{Aggregate, ExperimentReport, TrialSummary, REPORT_FORMAT};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "QDSEP_WORKERS";

/// Either problem class behind one type.
#[derive(Clone, Debug)]
pub enum AnyProblem {
    MaxCoverage(MaxCoverageProblem),
    SetCover(SetCoverProblem),
}

impl From<Instance> for AnyProblem {
    fn from(instance: Instance) -> Self {
        match instance {
            Instance::MaxCoverage(i) => AnyProblem::MaxCoverage(MaxCoverageProblem::max_coverage(i)),
            Instance::SetCover(i) => AnyProblem::SetCover(SetCoverProblem::new(i)),
        }
    }
}

impl Problem for AnyProblem {
    fn dimension(&self) -> usize {
        match self {
            AnyProblem::MaxCoverage(p) => p.dimension(),
            AnyProblem::SetCover(p) => p.dimension(),
        }
    }

    fn direction(&self) -> Direction {
        match self {
            AnyProblem::MaxCoverage(p) => p.direction(),
            AnyProblem::SetCover(p) => p.direction(),
        }
    }

    fn cell_count(&self) -> usize {
        match self {
            AnyProblem::MaxCoverage(p) => p.cell_count(),
            AnyProblem::SetCover(p) => p.cell_count(),
        }
    }

    #[inline]
    fn assess(&self, x: &Solution) -> Result<Evaluation> {
        match self {
            AnyProblem::MaxCoverage(p) => p.assess(x),
            AnyProblem::SetCover(p) => p.assess(x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptSource {
    ClosedForm,
    BruteForce,
}

/// OPT from the closed form when the instance records its constructor,
/// else by enumeration when `n` is small enough, else unknown.
pub fn resolve_opt(instance: &LabeledInstance) -> Result<Option<(Fitness, OptSource)>> {
    if let Some(origin) = &instance.origin {
        let v = match origin {
            Origin::Example1(p) => p.optimum_value(),
            Origin::Example2(p) => p.optimum_value(),
        };
        return Ok(Some((Fitness::from(v), OptSource::ClosedForm)));
    }
    if instance.instance.n() <= ENUMERATION_GUARD {
        let problem = AnyProblem::from(instance.instance.clone());
        return Ok(Some((brute_force_opt(&problem)?.opt, OptSource::BruteForce)));
    }
    Ok(None)
}

fn local_optimum(instance: &LabeledInstance) -> Result<Solution> {
    match &instance.origin {
        Some(Origin::Example1(p)) => Ok(p.local_optimum()),
        Some(Origin::Example2(p)) => Ok(p.local_optimum()),
        None => Err(Error::Config(
            "a local seed population needs an instance built by a known trap constructor".into(),
        )),
    }
}

fn worker_count(config: &ExperimentConfig) -> Result<usize> {
    if let Some(w) = config.workers {
        return Ok(w);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{WORKERS_ENV}={v:?} is not a worker count"))),
        Err(_) => Ok(0),
    }
}

/// Runs every trial of `config`. A `workers` value of 0 means one thread
/// per core.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.trials == 0 {
        return Err(Error::Config("trials must be >= 1".into()));
    }
    let labeled = config.problem.load()?;
    let problem = AnyProblem::from(labeled.instance.clone());
    let direction = problem.direction();
    let cells = problem.cell_count();

    let initial = config.initial.unwrap_or(cells);
    if initial != cells && !config.allow_unfair {
        return Err(Error::Config(format!(
            "initial size {initial} differs from the {cells} cells; set allow_unfair to run anyway"
        )));
    }
    let budget = config.budget.resolve(&labeled.instance)?;

    let opt = resolve_opt(&labeled)?;
    let target = match &config.target {
        None => None,
        Some(spec) => {
            let threshold = match spec.level {
                TargetLevel::Fitness(f) => f,
                TargetLevel::Ratio(r) => {
                    let (opt, _) = opt.ok_or_else(|| {
                        Error::Config("a ratio target needs OPT, which is unknown for this instance".into())
                    })?;
                    r * opt.0
                }
            };
            Some(Target {
                threshold: Fitness(threshold),
                cell: spec.cell,
                require_feasible: spec.require_feasible,
            })
        }
    };

    let seeds = match &config.seed_population {
        None => None,
        Some(_) if config.algorithm != Algorithm::Ea => {
            return Err(Error::Config("seeded populations apply to the EA only".into()))
        }
        Some(SeedPopulation::Local) => Some(vec![local_optimum(&labeled)?; initial]),
        Some(SeedPopulation::Explicit { solutions }) => {
            if solutions.len() != initial {
                return Err(Error::Config(format!(
                    "seed population has {} solutions, mu is {initial}",
                    solutions.len()
                )));
            }
            Some(solutions.clone())
        }
    };

    let mut base = RunConfig::new(budget, initial, 0).with_acceptance(config.acceptance);
    base.target = target.clone();
    base.validate()?;

    let run_one = |trial: usize| -> Result<TrialSummary> {
        let mut rc = base.clone();
        rc.seed = config.trial_seed(trial);
        let trace = match (config.algorithm, &seeds) {
            (Algorithm::MapElites, _) => run_map_elites(&problem, &rc)?,
            (Algorithm::Ea, None) => run_ea(&problem, &rc)?,
            (Algorithm::Ea, Some(s)) => run_ea_seeded(&problem, &rc, s)?,
        };
        summarize(trial, trace, direction, opt.map(|o| o.0))
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(config)?)
        .build()
        .map_err(|e| Error::State(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<TrialSummary>> = pool.install(|| (0..config.trials).into_par_iter().map(run_one).collect());
    let trials = results.into_iter().collect::<Result<Vec<_>>>()?;

    Ok(ExperimentReport {
        format: REPORT_FORMAT.to_string(),
        config: config.clone(),
        problem_kind: labeled.instance.kind().to_string(),
        n: problem.dimension(),
        cell_count: cells,
        direction,
        budget,
        initial,
        opt: opt.map(|o| o.0),
        opt_source: opt.map(|o| o.1),
        target,
        aggregate: Aggregate::from_trials(&trials, direction),
        trials,
    })
}

fn summarize(trial: usize, trace: RunTrace, direction: Direction, opt: Option<Fitness>) -> Result<TrialSummary> {
    let mut per_cell: BTreeMap<usize, Fitness> = BTreeMap::new();
    for e in trace.snapshot.elites() {
        per_cell
            .entry(e.cell)
            .and_modify(|f| {
                if direction.better(e.fitness, *f) {
                    *f = e.fitness
                }
            })
            .or_insert(e.fitness);
    }
    let best_fitness = trace.best_feasible_fitness();
    let ratio = match (best_fitness, opt) {
        (Some(f), Some(o)) if o.0 > 0.0 => Some(approximation_ratio(f, o, direction)?),
        _ => None,
    };
    Ok(TrialSummary {
        trial,
        seed: trace.seed,
        evaluations_used: trace.evaluations_used,
        steps: trace.steps,
        first_hit: trace.first_hit,
        best_fitness,
        best_solution: trace.best_feasible.map(|e| e.solution),
        ratio,
        coverage: per_cell.len(),
        qd_score: per_cell.values().map(|f| f.0).sum(),
        improvements_after_init: trace.improvements_after_init,
        improvement_log: trace.improvement_log,
        milestones: trace.milestones,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Budget, ProblemSpec, TargetSpec};
    use crate::instances::{Example1Params, Example2Params};

    fn star(trials: usize, budget: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(
            ProblemSpec::Example2(Example2Params::new(6).unwrap()),
            Algorithm::MapElites,
            Budget::Evaluations(budget),
            trials,
        );
        c.workers = Some(2);
        c
    }

    #[test]
    fn budget_equal_to_initial_runs_no_steps() {
        let r = run_experiment(&star(1, 6)).unwrap();
        assert_eq!(r.trials.len(), 1);
        assert_eq!(r.trials[0].steps, 0);
        assert_eq!(r.trials[0].evaluations_used, 6);
        assert_eq!(r.initial, 6);
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let mut c = star(6, 2000);
        c.master_seed = 99;
        let a = run_experiment(&c).unwrap();
        c.workers = Some(1);
        let mut b = run_experiment(&c).unwrap();
        b.config.workers = Some(2);
        assert_eq!(a, b);
        assert_eq!(a.trials.iter().map(|t| t.seed).collect::<Vec<_>>(), (99..105).collect::<Vec<_>>());
    }

    #[test]
    fn fairness_enforced() {
        let mut c = star(1, 100);
        c.initial = Some(3);
        assert!(run_experiment(&c).unwrap_err().is_config());
        c.allow_unfair = true;
        assert_eq!(run_experiment(&c).unwrap().initial, 3);
    }

    #[test]
    fn ratio_target_and_success_count() {
        let mut c = star(4, 20_000);
        c.target = Some(TargetSpec {
            level: TargetLevel::Ratio(1.0),
            cell: None,
            require_feasible: true,
        });
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.opt, Some(Fitness(5.0)));
        assert_eq!(r.opt_source, Some(OptSource::ClosedForm));
        assert_eq!(r.target.as_ref().unwrap().threshold, Fitness(5.0));
        let hits = r.trials.iter().filter(|t| t.first_hit.is_some()).count();
        assert_eq!(r.aggregate.successes, hits);
        for t in r.trials.iter().filter(|t| t.succeeded()) {
            assert_eq!(t.ratio, Some(1.0));
            assert_eq!(t.evaluations_used, t.first_hit.unwrap());
        }
    }

    #[test]
    fn seeded_local_population() {
        let mut c = star(2, 500);
        c.algorithm = Algorithm::Ea;
        c.seed_population = Some(SeedPopulation::Local);
        let r = run_experiment(&c).unwrap();
        for t in &r.trials {
            assert_eq!(t.best_fitness, Some(Fitness(64.0)));
            assert_eq!(t.coverage, 1);
            assert_eq!(t.improvements_after_init, 0);
        }
        c.algorithm = Algorithm::MapElites;
        assert!(run_experiment(&c).unwrap_err().is_config());
    }

    #[test]
    fn opt_sources_agree() {
        let p = Example1Params::new(9, 1, 3).unwrap();
        let labeled = LabeledInstance::from_origin(Origin::Example1(p)).unwrap();
        let closed = resolve_opt(&labeled).unwrap().unwrap();
        let brute = resolve_opt(&LabeledInstance::from(labeled.instance.clone())).unwrap().unwrap();
        assert_eq!(closed.1, OptSource::ClosedForm);
        assert_eq!(brute.1, OptSource::BruteForce);
        assert_eq!(closed.0, brute.0);
    }

    #[test]
    fn ratio_target_without_opt_is_config_error() {
        let mut c = ExperimentConfig::new(
            ProblemSpec::RandomMaxCoverage {
                n: 30,
                m: 40,
                density: 0.1,
                k: 5,
                seed: 1,
            },
            Algorithm::Ea,
            Budget::Evaluations(100),
            1,
        );
        c.target = Some(TargetSpec {
            level: TargetLevel::Ratio(0.9),
            cell: None,
            require_feasible: true,
        });
        assert!(run_experiment(&c).unwrap_err().is_config());
    }
}
