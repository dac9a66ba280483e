//! Multi-trial experiments: configuration, seeded parallel execution, and
//! report export.
//!
//! Trial `i` of an experiment runs with seed `master_seed + i`, so any
//! single trial can be reproduced by running the algorithm directly with
//! that seed. Trials run on a rayon pool; results are folded in trial order,
//! so reports are identical whatever the worker count.

mod config;
mod report;
mod run;

pub use config::{Algorithm, Budget, ExperimentConfig, ProblemSpec, SeedPopulation, TargetLevel, TargetSpec};
pub use report::{
    export_report, read_report, render_rows, Aggregate, ExperimentReport, ReportFormat, TrialSummary,
    REPORT_FORMAT, ROWS_HEADER,
};
pub use run::{resolve_opt, run_experiment, AnyProblem, OptSource, WORKERS_ENV};
