use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algorithms::{Improvement, Milestone, Target};
use crate::error::{Error, Result};
use crate::problems::{Direction, Fitness};
use crate::solution::Solution;

use super::config::ExperimentConfig;
use super::run::OptSource;

pub const REPORT_FORMAT: &str = "qdsep-report/1";

pub const ROWS_HEADER: &str = "trial,seed,evaluations_used,first_hit,best_fitness,ratio,coverage,qd_score";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub seed: u64,
    pub evaluations_used: u64,
    pub steps: u64,
    pub first_hit: Option<u64>,
    /// Best feasible fitness seen during the run.
    pub best_fitness: Option<Fitness>,
    pub best_solution: Option<Solution>,
    /// `best_fitness / OPT`, when both are known.
    pub ratio: Option<f64>,
    /// Distinct cells held by the final archive or population.
    pub coverage: usize,
    /// Sum over those cells of the best fitness held in each.
    pub qd_score: f64,
    pub improvements_after_init: u64,
    pub improvement_log: Vec<Improvement>,
    pub milestones: Vec<Milestone>,
}

impl TrialSummary {
    pub fn succeeded(&self) -> bool {
        self.first_hit.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    /// Trials with a `first_hit`.
    pub successes: usize,
    /// Over successful trials only.
    pub median_first_hit: Option<f64>,
    pub mean_first_hit: Option<f64>,
    /// Best ratio over all trials, in the problem's direction.
    pub best_ratio: Option<f64>,
    /// Over trials that have a ratio.
    pub median_ratio: Option<f64>,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let h = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[h] } else { (v[h - 1] + v[h]) / 2.0 })
}

impl Aggregate {
    pub fn from_trials(trials: &[TrialSummary], direction: Direction) -> Self {
        let hits: Vec<f64> = trials.iter().filter_map(|t| t.first_hit).map(|h| h as f64).collect();
        let ratios: Vec<f64> = trials.iter().filter_map(|t| t.ratio).collect();
        Aggregate {
            successes: hits.len(),
            mean_first_hit: (!hits.is_empty()).then(|| hits.iter().sum::<f64>() / hits.len() as f64),
            median_first_hit: median(hits),
            best_ratio: ratios
                .iter()
                .copied()
                .max_by(|a, b| direction.rank(Fitness(*a), Fitness(*b))),
            median_ratio: median(ratios),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub format: String,
    pub config: ExperimentConfig,
    pub problem_kind: String,
    pub n: usize,
    pub cell_count: usize,
    pub direction: Direction,
    /// Resolved per-trial evaluation budget.
    pub budget: u64,
    pub initial: usize,
    pub opt: Option<Fitness>,
    pub opt_source: Option<OptSource>,
    /// Resolved target, if any.
    pub target: Option<Target>,
    pub trials: Vec<TrialSummary>,
    pub aggregate: Aggregate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    /// One comma-separated line per trial after [`ROWS_HEADER`].
    Rows,
    /// The whole report as JSON.
    Document,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rows" => Ok(ReportFormat::Rows),
            "document" => Ok(ReportFormat::Document),
            other => Err(Error::Config(format!(
                "unknown report format {other:?}, expected \"rows\" or \"document\""
            ))),
        }
    }
}

fn opt_field<T: std::fmt::Debug>(v: Option<T>) -> String {
    v.map(|v| format!("{v:?}")).unwrap_or_default()
}

/// Missing values are empty fields; floats use Rust's shortest round-trip
/// form, so `1.0` prints as `1.0`.
pub fn render_rows(report: &ExperimentReport) -> String {
    let mut out = String::with_capacity(64 * (report.trials.len() + 1));
    out.push_str(ROWS_HEADER);
    out.push('\n');
    for t in &report.trials {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:?}",
            t.trial,
            t.seed,
            t.evaluations_used,
            opt_field(t.first_hit),
            opt_field(t.best_fitness.map(|f| f.0)),
            opt_field(t.ratio),
            t.coverage,
            t.qd_score
        )
        .expect("writing to a String");
    }
    out
}

pub fn export_report(report: &ExperimentReport, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        ReportFormat::Rows => render_rows(report),
        ReportFormat::Document => {
            let mut s = serde_json::to_string_pretty(report).expect("report is always serializable");
            s.push('\n');
            s
        }
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads a document-format report.
pub fn read_report(path: impl AsRef<Path>) -> Result<ExperimentReport> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report: ExperimentReport = serde_json::from_str(&text).map_err(|e| Error::Parse {
        context: format!("{}:{}", path.display(), e.line()),
        message: e.to_string(),
    })?;
    if report.format != REPORT_FORMAT {
        return Err(Error::Parse {
            context: path.display().to_string(),
            message: format!("unsupported report format {:?}", report.format),
        });
    }
    Ok(report)
}
