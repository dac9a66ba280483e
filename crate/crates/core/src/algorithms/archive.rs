use super::trace::Tracker;
use super::{Acceptance, Elite, RunConfig, RunTrace, Snapshot};
use crate::error::{Error, Result};
use crate::mutation::bitwise_mutate;
use crate::problems::{Direction, Evaluation, Problem};
use crate::rng::RandomSource;
use crate::solution::Solution;

/// MAP-Elites archive: one optional elite per behavior cell.
#[derive(Clone, Debug)]
pub struct Archive {
    cells: Vec<Option<Elite>>,
    // occupied cell indices in order of first occupation; parent selection
    // draws uniformly from this list
    occupied: Vec<usize>,
    evaluations: u64,
}

/// What happened to an offered solution.
#[derive(Clone, Debug, PartialEq)]
pub enum Placement {
    /// The cell was empty.
    Filled,
    /// The previous occupant was displaced.
    Replaced(Elite),
    Rejected,
}

impl Placement {
    pub fn accepted(&self) -> bool {
        !matches!(self, Placement::Rejected)
    }
}

/// One MAP-Elites iteration: parent cell, offspring, and its placement.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    /// `None` for a uniformly sampled initial solution.
    pub parent_cell: Option<usize>,
    pub offspring: Solution,
    pub evaluation: Evaluation,
    pub placement: Placement,
}

impl Archive {
    pub fn new(cell_count: usize) -> Self {
        Archive {
            cells: vec![None; cell_count],
            occupied: Vec::new(),
            evaluations: 0,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn get(&self, cell: usize) -> Option<&Elite> {
        self.cells.get(cell).and_then(Option::as_ref)
    }

    /// Number of occupied cells (the coverage metric).
    pub fn occupied_count(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    /// Fitness evaluations spent building this archive.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Occupied cells in increasing cell order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Elite)> {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|e| (i, e)))
    }

    /// Applies the cell update rule: place if the cell is empty or the
    /// newcomer beats the occupant under `acceptance`.
    pub fn offer(
        &mut self,
        solution: Solution,
        evaluation: Evaluation,
        direction: Direction,
        acceptance: Acceptance,
    ) -> Placement {
        let cell = evaluation.cell;
        assert!(cell < self.cells.len(), "descriptor {cell} outside the archive");
        match &mut self.cells[cell] {
            slot @ None => {
                *slot = Some(Elite::new(solution, evaluation));
                self.occupied.push(cell);
                Placement::Filled
            }
            Some(current) => {
                if acceptance.accepts(direction, evaluation.fitness, current.fitness) {
                    let old = std::mem::replace(current, Elite::new(solution, evaluation));
                    Placement::Replaced(old)
                } else {
                    Placement::Rejected
                }
            }
        }
    }

    fn sample_initial<P: Problem + ?Sized>(
        &mut self,
        problem: &P,
        rng: &mut RandomSource,
        acceptance: Acceptance,
    ) -> Result<StepOutcome> {
        let x = rng.uniform_solution(problem.dimension());
        let evaluation = problem.assess(&x)?;
        self.evaluations += 1;
        let placement = self.offer(x.clone(), evaluation, problem.direction(), acceptance);
        Ok(StepOutcome {
            parent_cell: None,
            offspring: x,
            evaluation,
            placement,
        })
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot::Archive(self.iter().map(|(_, e)| e.clone()).collect())
    }
}

/// Fills a fresh archive with `initial` uniformly random solutions.
pub fn map_elites_init<P: Problem + ?Sized>(
    problem: &P,
    initial: usize,
    rng: &mut RandomSource,
    acceptance: Acceptance,
) -> Result<Archive> {
    if initial == 0 {
        return Err(Error::Parameter("MAP-Elites needs at least one initial solution".into()));
    }
    let mut archive = Archive::new(problem.cell_count());
    for _ in 0..initial {
        archive.sample_initial(problem, rng, acceptance)?;
    }
    Ok(archive)
}

/// One iteration: uniform parent among occupied cells, bit-wise mutation,
/// one evaluation, cell update.
pub fn map_elites_step<P: Problem + ?Sized>(
    archive: &mut Archive,
    problem: &P,
    rng: &mut RandomSource,
    acceptance: Acceptance,
) -> Result<StepOutcome> {
    if archive.is_empty() {
        return Err(Error::State("cannot select a parent from an empty archive".into()));
    }
    let parent_cell = archive.occupied[rng.below(archive.occupied.len())];
    let parent = &archive.cells[parent_cell].as_ref().expect("occupied").solution;
    let offspring = bitwise_mutate(parent, rng);
    let evaluation = problem.assess(&offspring)?;
    archive.evaluations += 1;
    let placement = archive.offer(offspring.clone(), evaluation, problem.direction(), acceptance);
    Ok(StepOutcome {
        parent_cell: Some(parent_cell),
        offspring,
        evaluation,
        placement,
    })
}

/// Runs MAP-Elites with `I = config.initial` until the budget is spent or
/// the target is met.
pub fn run_map_elites<P: Problem + ?Sized>(problem: &P, config: &RunConfig) -> Result<RunTrace> {
    config.validate()?;
    let mut rng = RandomSource::new(config.seed);
    let mut archive = Archive::new(problem.cell_count());
    let mut tracker = Tracker::new(problem.direction(), config.target.as_ref(), config.budget);

    let mut done = false;
    for _ in 0..config.initial {
        let out = archive.sample_initial(problem, &mut rng, config.acceptance)?;
        if tracker.record(&out.offspring, &out.evaluation, || archive.occupied_count()) {
            done = true;
            break;
        }
    }
    tracker.end_initialization();
    while !done && tracker.evaluations < config.budget {
        let out = map_elites_step(&mut archive, problem, &mut rng, config.acceptance)?;
        done = tracker.record(&out.offspring, &out.evaluation, || archive.occupied_count());
    }
    Ok(tracker.finish(config.seed, config.initial, archive.snapshot()))
}
