//! MAP-Elites and the (mu+1)-EA, with budgeted run loops.
//!
//! Both algorithms spend exactly one fitness evaluation per generated
//! solution, initial ones included, so `evaluations_used` in a
//! [`RunTrace`] is directly comparable between them.

mod archive;
mod population;
mod trace;

pub use archive::{map_elites_init, map_elites_step, run_map_elites, Archive, Placement, StepOutcome};
pub use population::{
    ea_init, mu_plus_one_step, run_ea, run_ea_seeded, seed_population, Population, PopulationDelta,
};
pub use trace::{Improvement, Milestone, RunTrace, Snapshot};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{Direction, Evaluation, Fitness};
use crate::solution::Solution;

/// Survivor acceptance rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Acceptance {
    /// Replace only when the newcomer is strictly better.
    #[default]
    Strict,
    /// Also replace on ties.
    NonStrict,
}

impl Acceptance {
    #[inline]
    pub fn accepts(self, direction: Direction, newcomer: Fitness, incumbent: Fitness) -> bool {
        match self {
            Acceptance::Strict => direction.better(newcomer, incumbent),
            Acceptance::NonStrict => direction.at_least_as_good(newcomer, incumbent),
        }
    }
}

/// A stored solution with its evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elite {
    pub solution: Solution,
    pub fitness: Fitness,
    pub cell: usize,
    pub feasible: bool,
}

impl Elite {
    pub fn new(solution: Solution, evaluation: Evaluation) -> Self {
        Elite {
            solution,
            fitness: evaluation.fitness,
            cell: evaluation.cell,
            feasible: evaluation.feasible,
        }
    }
}

/// A quality level whose first attainment is timed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Target {
    /// Met when fitness is at least this good in the problem's direction.
    pub threshold: Fitness,
    #[serde(default)]
    pub cell: Option<usize>,
    #[serde(default = "default_true")]
    pub require_feasible: bool,
}

fn default_true() -> bool {
    true
}

impl Target {
    pub fn feasible_at_least(threshold: f64) -> Self {
        Target {
            threshold: Fitness(threshold),
            cell: None,
            require_feasible: true,
        }
    }

    pub fn in_cell(mut self, cell: usize) -> Self {
        self.cell = Some(cell);
        self
    }

    pub fn is_met(&self, direction: Direction, evaluation: &Evaluation) -> bool {
        (!self.require_feasible || evaluation.feasible)
            && self.cell.is_none_or(|c| c == evaluation.cell)
            && direction.at_least_as_good(evaluation.fitness, self.threshold)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Maximum number of fitness evaluations, initial solutions included.
    pub budget: u64,
    /// `I` for MAP-Elites, `mu` for the EA.
    pub initial: usize,
    pub seed: u64,
    #[serde(default)]
    pub target: Option<Target>,
    #[serde(default)]
    pub acceptance: Acceptance,
}

impl RunConfig {
    pub fn new(budget: u64, initial: usize, seed: u64) -> Self {
        RunConfig {
            budget,
            initial,
            seed,
            target: None,
            acceptance: Acceptance::Strict,
        }
    }

    pub fn with_target(mut self, target: Target) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_acceptance(mut self, acceptance: Acceptance) -> Self {
        self.acceptance = acceptance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial == 0 {
            return Err(Error::Config("initial solution count must be >= 1".into()));
        }
        if self.budget < self.initial as u64 {
            return Err(Error::Config(format!(
                "budget {} is smaller than the {} initial evaluations",
                self.budget, self.initial
            )));
        }
        Ok(())
    }
}
