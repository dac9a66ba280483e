use serde::{Deserialize, Serialize};

use super::{Elite, Target};
use crate::problems::{Direction, Evaluation, Fitness};
use crate::solution::Solution;

/// Periodic progress sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Milestone {
    pub evaluation: u64,
    pub best_fitness: Option<Fitness>,
    pub occupied: usize,
}

/// A strict improvement of the best feasible fitness seen so far.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub evaluation: u64,
    pub solution: Solution,
    pub fitness: Fitness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "entries", rename_all = "lowercase")]
pub enum Snapshot {
    Archive(Vec<Elite>),
    Population(Vec<Elite>),
}

impl Snapshot {
    pub fn elites(&self) -> &[Elite] {
        match self {
            Snapshot::Archive(e) | Snapshot::Population(e) => e,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub seed: u64,
    pub evaluations_used: u64,
    /// Mutation steps after initialization.
    pub steps: u64,
    /// Evaluation index (1-based, initial solutions counted) at which the
    /// target was first met.
    pub first_hit: Option<u64>,
    pub best_feasible: Option<Elite>,
    /// Strict improvements of the best feasible fitness made after initialization.
    pub improvements_after_init: u64,
    pub improvement_log: Vec<Improvement>,
    pub milestones: Vec<Milestone>,
    pub snapshot: Snapshot,
}

impl RunTrace {
    pub fn best_feasible_fitness(&self) -> Option<Fitness> {
        self.best_feasible.as_ref().map(|e| e.fitness)
    }
}

/// Per-evaluation bookkeeping shared by both run loops.
pub(super) struct Tracker<'a> {
    direction: Direction,
    target: Option<&'a Target>,
    cadence: u64,
    pub evaluations: u64,
    pub first_hit: Option<u64>,
    pub best: Option<Elite>,
    initializing: bool,
    pub improvements_after_init: u64,
    pub improvement_log: Vec<Improvement>,
    pub milestones: Vec<Milestone>,
}

impl<'a> Tracker<'a> {
    pub fn new(direction: Direction, target: Option<&'a Target>, budget: u64) -> Self {
        Tracker {
            direction,
            target,
            cadence: budget.div_ceil(1000).max(1),
            evaluations: 0,
            first_hit: None,
            best: None,
            initializing: true,
            improvements_after_init: 0,
            improvement_log: Vec::new(),
            milestones: Vec::new(),
        }
    }

    pub fn end_initialization(&mut self) {
        self.initializing = false;
    }

    /// Records one evaluation. `occupied` is evaluated lazily, only when a
    /// milestone is written. Returns true once the target has been met.
    pub fn record(
        &mut self,
        solution: &Solution,
        evaluation: &Evaluation,
        occupied: impl FnOnce() -> usize,
    ) -> bool {
        self.evaluations += 1;
        let mut improved = false;
        if evaluation.feasible
            && self
                .best
                .as_ref()
                .is_none_or(|b| self.direction.better(evaluation.fitness, b.fitness))
        {
            improved = true;
            self.best = Some(Elite::new(solution.clone(), *evaluation));
            self.improvement_log.push(Improvement {
                evaluation: self.evaluations,
                solution: solution.clone(),
                fitness: evaluation.fitness,
            });
            if !self.initializing {
                self.improvements_after_init += 1;
            }
        }
        if self.first_hit.is_none() && self.target.is_some_and(|t| t.is_met(self.direction, evaluation)) {
            self.first_hit = Some(self.evaluations);
        }
        if improved || self.evaluations.is_multiple_of(self.cadence) {
            self.milestones.push(Milestone {
                evaluation: self.evaluations,
                best_fitness: self.best.as_ref().map(|b| b.fitness),
                occupied: occupied(),
            });
        }
        self.first_hit.is_some()
    }

    pub fn finish(self, seed: u64, initial: usize, snapshot: Snapshot) -> RunTrace {
        RunTrace {
            seed,
            evaluations_used: self.evaluations,
            steps: self.evaluations.saturating_sub(initial as u64),
            first_hit: self.first_hit,
            best_feasible: self.best,
            improvements_after_init: self.improvements_after_init,
            improvement_log: self.improvement_log,
            milestones: self.milestones,
            snapshot,
        }
    }
}
