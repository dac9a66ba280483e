use std::collections::BTreeSet;

use super::trace::Tracker;
use super::{Acceptance, Elite, RunConfig, RunTrace, Snapshot};
use crate::error::{Error, Result};
use crate::mutation::bitwise_mutate;
use crate::problems::{Evaluation, Fitness, Problem};
use crate::rng::RandomSource;
use crate::solution::Solution;

/// Fixed-size multiset of evaluated solutions.
#[derive(Clone, Debug)]
pub struct Population {
    members: Vec<Elite>,
    evaluations: u64,
}

#[derive(Clone, Debug)]
pub struct PopulationDelta {
    pub parent: usize,
    pub offspring: Solution,
    pub evaluation: Evaluation,
    /// Slot that received the offspring and the member it evicted.
    pub replaced: Option<(usize, Elite)>,
}

impl Population {
    pub fn members(&self) -> &[Elite] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Worst fitness under `problem`'s direction.
    pub fn worst_fitness<P: Problem + ?Sized>(&self, problem: &P) -> Fitness {
        let dir = problem.direction();
        self.members
            .iter()
            .map(|m| m.fitness)
            .min_by(|a, b| dir.rank(*a, *b))
            .expect("population is never empty")
    }

    /// Distinct descriptor cells represented in the population.
    pub fn distinct_cells(&self) -> usize {
        self.members.iter().map(|m| m.cell).collect::<BTreeSet<_>>().len()
    }

    fn push_evaluated<P: Problem + ?Sized>(&mut self, problem: &P, x: Solution) -> Result<Evaluation> {
        let evaluation = problem.assess(&x)?;
        self.evaluations += 1;
        self.members.push(Elite::new(x, evaluation));
        Ok(evaluation)
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot::Population(self.members.clone())
    }
}

/// `mu` uniformly random solutions, each evaluated once.
pub fn ea_init<P: Problem + ?Sized>(problem: &P, mu: usize, rng: &mut RandomSource) -> Result<Population> {
    if mu == 0 {
        return Err(Error::Parameter("population size must be >= 1".into()));
    }
    let mut pop = Population {
        members: Vec::with_capacity(mu),
        evaluations: 0,
    };
    for _ in 0..mu {
        let x = rng.uniform_solution(problem.dimension());
        pop.push_evaluated(problem, x)?;
    }
    Ok(pop)
}

/// A population made of exactly the given solutions, multiplicity kept.
pub fn seed_population<P: Problem + ?Sized>(solutions: &[Solution], problem: &P) -> Result<Population> {
    if solutions.is_empty() {
        return Err(Error::Parameter("seeded population must not be empty".into()));
    }
    if let Some(bad) = solutions.iter().find(|s| s.len() != problem.dimension()) {
        return Err(Error::Parameter(format!(
            "seed solution {bad} has length {}, problem dimension is {}",
            bad.len(),
            problem.dimension()
        )));
    }
    let mut pop = Population {
        members: Vec::with_capacity(solutions.len()),
        evaluations: 0,
    };
    for x in solutions {
        pop.push_evaluated(problem, x.clone())?;
    }
    Ok(pop)
}

/// One (mu+1) iteration: uniform parent, bit-wise mutation, one
/// evaluation; the offspring replaces a worst member (ties broken
/// uniformly) if it beats it under `acceptance`.
pub fn mu_plus_one_step<P: Problem + ?Sized>(
    pop: &mut Population,
    problem: &P,
    rng: &mut RandomSource,
    acceptance: Acceptance,
) -> Result<PopulationDelta> {
    let parent = rng.below(pop.members.len());
    let offspring = bitwise_mutate(&pop.members[parent].solution, rng);
    let evaluation = problem.assess(&offspring)?;
    pop.evaluations += 1;

    let dir = problem.direction();
    let worst = pop.worst_fitness(problem);
    let mut replaced = None;
    if acceptance.accepts(dir, evaluation.fitness, worst) {
        let tied: Vec<usize> = (0..pop.members.len())
            .filter(|&i| pop.members[i].fitness == worst)
            .collect();
        let slot = tied[rng.below(tied.len())];
        let old = std::mem::replace(&mut pop.members[slot], Elite::new(offspring.clone(), evaluation));
        replaced = Some((slot, old));
    }
    Ok(PopulationDelta {
        parent,
        offspring,
        evaluation,
        replaced,
    })
}

fn evolve<P: Problem + ?Sized>(
    problem: &P,
    config: &RunConfig,
    rng: &mut RandomSource,
    mut pop: Population,
    mut tracker: Tracker<'_>,
    mut done: bool,
) -> Result<RunTrace> {
    tracker.end_initialization();
    while !done && tracker.evaluations < config.budget {
        let d = mu_plus_one_step(&mut pop, problem, rng, config.acceptance)?;
        done = tracker.record(&d.offspring, &d.evaluation, || pop.distinct_cells());
    }
    Ok(tracker.finish(config.seed, config.initial, pop.snapshot()))
}

/// Runs the (mu+1)-EA with `mu = config.initial` from a uniformly random
/// population.
pub fn run_ea<P: Problem + ?Sized>(problem: &P, config: &RunConfig) -> Result<RunTrace> {
    config.validate()?;
    let mut rng = RandomSource::new(config.seed);
    let mut tracker = Tracker::new(problem.direction(), config.target.as_ref(), config.budget);
    let mut pop = Population {
        members: Vec::with_capacity(config.initial),
        evaluations: 0,
    };
    let mut done = false;
    for _ in 0..config.initial {
        let x = rng.uniform_solution(problem.dimension());
        let e = pop.push_evaluated(problem, x)?;
        let x = &pop.members.last().expect("just pushed").solution;
        done = tracker.record(x, &e, || 0);
        if done {
            break;
        }
    }
    evolve(problem, config, &mut rng, pop, tracker, done)
}

/// Runs the (mu+1)-EA from an explicit initial population. The seed
/// solutions are evaluated and count against the budget.
pub fn run_ea_seeded<P: Problem + ?Sized>(
    problem: &P,
    config: &RunConfig,
    seeds: &[Solution],
) -> Result<RunTrace> {
    config.validate()?;
    if seeds.len() != config.initial {
        return Err(Error::Config(format!(
            "seeded population has {} members, mu is {}",
            seeds.len(),
            config.initial
        )));
    }
    let pop = seed_population(seeds, problem)?;
    let mut tracker = Tracker::new(problem.direction(), config.target.as_ref(), config.budget);
    let mut done = false;
    for m in pop.members() {
        let e = Evaluation {
            fitness: m.fitness,
            cell: m.cell,
            feasible: m.feasible,
        };
        done = tracker.record(&m.solution, &e, || 0);
        if done {
            break;
        }
    }
    let mut rng = RandomSource::new(config.seed);
    evolve(problem, config, &mut rng, pop, tracker, done)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{example1_max_coverage, example2_set_cover, Example1Params, Example2Params};
    use crate::problems::{Direction, MaxCoverageProblem, SetCoverProblem, SetFunction, SizeConstrainedSubmodularProblem};

    fn ex1(n: usize, a: u64, b: u64) -> (Example1Params, MaxCoverageProblem) {
        let p = Example1Params::new(n, a, b).unwrap();
        (p, MaxCoverageProblem::max_coverage(example1_max_coverage(&p).unwrap()))
    }

    fn ex2(n: usize) -> (Example2Params, SetCoverProblem) {
        let p = Example2Params::new(n).unwrap();
        (p, SetCoverProblem::new(example2_set_cover(&p).unwrap()))
    }

    /// f(x) = value of the lowest set bit's position table; lets tests
    /// dictate fitness directly.
    struct Table(Vec<f64>);

    impl SetFunction for Table {
        fn ground_size(&self) -> usize {
            self.0.len()
        }
        fn value(&self, x: &Solution) -> f64 {
            x.iter_ones().next().map_or(0.0, |i| self.0[i])
        }
    }

    #[test]
    fn init_examples() {
        let (_, p) = ex1(30, 1, 10);
        let pop = ea_init(&p, 1, &mut RandomSource::new(2)).unwrap();
        assert_eq!(pop.size(), 1);
        let a = ea_init(&p, 31, &mut RandomSource::new(2)).unwrap();
        let b = ea_init(&p, 31, &mut RandomSource::new(2)).unwrap();
        assert_eq!(a.size(), 31);
        assert_eq!(a.evaluations(), 31);
        assert_eq!(a.members(), b.members());
        assert!(ea_init(&p, 0, &mut RandomSource::new(2)).is_err());
    }

    #[test]
    fn seeding_examples() {
        let (p2, sc) = ex2(12);
        let pop = seed_population(&vec![p2.local_optimum(); 12], &sc).unwrap();
        assert!(pop.members().iter().all(|m| m.fitness == Fitness(4096.0)));
        assert_eq!(pop.evaluations(), 12);

        let (p1, mc) = ex1(30, 1, 10);
        let pop = seed_population(&vec![p1.local_optimum(); 31], &mc).unwrap();
        assert!(pop.members().iter().all(|m| m.fitness == Fitness(121.0)));

        let mixed = vec![p1.optimum(), p1.local_optimum(), p1.local_optimum()];
        let pop = seed_population(&mixed, &mc).unwrap();
        let fits: Vec<f64> = pop.members().iter().map(|m| m.fitness.value()).collect();
        assert_eq!(fits, vec![209.0, 121.0, 121.0]);

        assert!(matches!(
            seed_population(&[Solution::zeros(3)], &mc),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn identical_population_rejects_copies() {
        let (p2, sc) = ex2(5);
        let mut pop = seed_population(&vec![p2.local_optimum(); 4], &sc).unwrap();
        let mut rng = RandomSource::new(0);
        for _ in 0..500 {
            let d = mu_plus_one_step(&mut pop, &sc, &mut rng, Acceptance::Strict).unwrap();
            if d.offspring == p2.local_optimum() {
                assert!(d.replaced.is_none());
            }
        }
    }

    #[test]
    fn offspring_replaces_worst() {
        // f = 3 for the member starting with bit 0, f = 5 for bit 1, f = 4 for bit 2
        let f = Table(vec![3.0, 5.0, 4.0]);
        let p = SizeConstrainedSubmodularProblem::new(f, 3).unwrap();
        let a: Solution = "100".parse().unwrap();
        let b: Solution = "010".parse().unwrap();
        let mut rng = RandomSource::new(1);
        let mut seen = false;
        for _ in 0..2000 {
            let mut pop = seed_population(&[a.clone(), b.clone()], &p).unwrap();
            let d = mu_plus_one_step(&mut pop, &p, &mut rng, Acceptance::Strict).unwrap();
            if d.evaluation.fitness == Fitness(4.0) {
                seen = true;
                let (slot, old) = d.replaced.expect("4 beats 3");
                assert_eq!(slot, 0);
                assert_eq!(old.fitness, Fitness(3.0));
                let mut fits: Vec<f64> = pop.members().iter().map(|m| m.fitness.value()).collect();
                fits.sort_by(f64::total_cmp);
                assert_eq!(fits, vec![4.0, 5.0]);
            }
        }
        assert!(seen);
    }

    #[test]
    fn tied_worst_members_are_evicted_uniformly() {
        // two members tie at f = 1; a better offspring must evict each half the time
        let f = Table(vec![1.0, 1.0, 9.0, 9.0]);
        let p = SizeConstrainedSubmodularProblem::new(f, 4).unwrap();
        let seeds: Vec<Solution> = ["1000", "0100", "0010"].iter().map(|s| s.parse().unwrap()).collect();
        let mut counts = [0usize; 2];
        let mut trials = 0;
        let mut seed = 0;
        while trials < 10_000 {
            seed += 1;
            let mut pop = seed_population(&seeds, &p).unwrap();
            let mut rng = RandomSource::new(seed);
            let d = mu_plus_one_step(&mut pop, &p, &mut rng, Acceptance::Strict).unwrap();
            if let Some((slot, _)) = d.replaced {
                assert!(slot < 2);
                counts[slot] += 1;
                trials += 1;
            }
        }
        let frac = counts[0] as f64 / trials as f64;
        let sigma = (0.25 / trials as f64).sqrt();
        assert!((frac - 0.5).abs() <= 3.0 * sigma, "eviction split {counts:?}");
    }

    #[test]
    fn worst_fitness_respects_direction() {
        let (p2, sc) = ex2(5);
        let pop = seed_population(&[p2.optimum(), p2.local_optimum()], &sc).unwrap();
        assert_eq!(sc.direction(), Direction::Minimize);
        assert_eq!(pop.worst_fitness(&sc), Fitness(32.0));
    }

    #[test]
    fn worst_member_never_worsens() {
        let (_, p) = ex1(30, 1, 10);
        let mut rng = RandomSource::new(21);
        let mut pop = ea_init(&p, 31, &mut rng).unwrap();
        let mut worst = pop.worst_fitness(&p);
        for _ in 0..20_000 {
            mu_plus_one_step(&mut pop, &p, &mut rng, Acceptance::Strict).unwrap();
            assert_eq!(pop.size(), 31);
            let w = pop.worst_fitness(&p);
            assert!(w >= worst);
            worst = w;
        }
        assert_eq!(pop.evaluations(), 20_031);
    }

    #[test]
    fn budget_equal_to_mu_means_no_steps() {
        let (_, p) = ex2(6);
        let t = run_ea(&p, &RunConfig::new(6, 6, 1)).unwrap();
        assert_eq!((t.evaluations_used, t.steps), (6, 0));
        assert!(matches!(t.snapshot, Snapshot::Population(ref m) if m.len() == 6));
    }

    #[test]
    fn seeded_run_checks_size_and_is_deterministic() {
        let (p2, sc) = ex2(8);
        let cfg = RunConfig::new(10_000, 8, 4);
        assert!(run_ea_seeded(&sc, &cfg, &vec![p2.local_optimum(); 7]).is_err());
        let seeds = vec![p2.local_optimum(); 8];
        let a = run_ea_seeded(&sc, &cfg, &seeds).unwrap();
        let b = run_ea_seeded(&sc, &cfg, &seeds).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.evaluations_used, 10_000);
        assert_eq!(a.improvements_after_init, 0);
    }
}
