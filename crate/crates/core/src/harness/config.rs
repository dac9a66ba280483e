use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithms::Acceptance;
use crate::error::{Error, Result};
use crate::instances::{
    random_max_coverage, random_set_cover, read_instance, Example1Params, Example2Params, Instance,
    LabeledInstance, Origin,
};
use crate::rng::RandomSource;
use crate::solution::Solution;

/// Where the instance comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemSpec {
    /// An instance file. Relative paths in a config file are resolved
    /// against the config file's directory.
    File { path: PathBuf },
    Example1(Example1Params),
    Example2(Example2Params),
    RandomMaxCoverage {
        n: usize,
        m: usize,
        density: f64,
        k: usize,
        seed: u64,
    },
    RandomSetCover {
        n: usize,
        m: usize,
        density: f64,
        max_weight: u64,
        seed: u64,
    },
}

impl ProblemSpec {
    pub fn load(&self) -> Result<LabeledInstance> {
        match self {
            ProblemSpec::File { path } => read_instance(path),
            ProblemSpec::Example1(p) => LabeledInstance::from_origin(Origin::Example1(*p)),
            ProblemSpec::Example2(p) => LabeledInstance::from_origin(Origin::Example2(*p)),
            &ProblemSpec::RandomMaxCoverage { n, m, density, k, seed } => {
                let mut rng = RandomSource::new(seed);
                Ok(Instance::MaxCoverage(random_max_coverage(n, m, density, k, &mut rng)?).into())
            }
            &ProblemSpec::RandomSetCover {
                n,
                m,
                density,
                max_weight,
                seed,
            } => {
                let mut rng = RandomSource::new(seed);
                Ok(Instance::SetCover(random_set_cover(n, m, density, max_weight, &mut rng)?).into())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    MapElites,
    Ea,
}

/// Evaluation budget per trial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Budget {
    Evaluations(u64),
    /// `multiplier * n^2 * (ln n + k)` for max coverage,
    /// `multiplier * m * n * (m + ln n + ln(w_max / w_min))` for set cover,
    /// rounded up.
    Bound {
        #[serde(default = "default_multiplier")]
        multiplier: f64,
    },
}

fn default_multiplier() -> f64 {
    20.0
}

impl Budget {
    pub fn resolve(&self, instance: &Instance) -> Result<u64> {
        match *self {
            Budget::Evaluations(b) => Ok(b),
            Budget::Bound { multiplier } => {
                if !(multiplier > 0.0 && multiplier.is_finite()) {
                    return Err(Error::Config(format!("budget multiplier must be positive, got {multiplier}")));
                }
                let n = instance.n() as f64;
                let raw = match instance {
                    Instance::MaxCoverage(i) => multiplier * n * n * (n.ln() + i.k() as f64),
                    Instance::SetCover(i) => {
                        let m = i.m_elements() as f64;
                        multiplier * m * n * (m + n.ln() + (i.w_max() as f64 / i.w_min() as f64).ln())
                    }
                };
                Ok(raw.ceil() as u64)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetLevel {
    /// Fitness at least as good as `ratio * OPT`. Needs a known OPT.
    Ratio(f64),
    Fitness(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    #[serde(flatten)]
    pub level: TargetLevel,
    #[serde(default)]
    pub cell: Option<usize>,
    #[serde(default = "default_true")]
    pub require_feasible: bool,
}

fn default_true() -> bool {
    true
}

/// Initial population for the EA in place of random initialization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SeedPopulation {
    /// `mu` copies of the instance's known local optimum.
    Local,
    Explicit { solutions: Vec<Solution> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub algorithm: Algorithm,
    pub budget: Budget,
    /// `I` or `mu`; defaults to the problem's cell count.
    #[serde(default)]
    pub initial: Option<usize>,
    pub trials: usize,
    /// Trial `i` runs with seed `master_seed + i` (wrapping).
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub acceptance: Acceptance,
    #[serde(default)]
    pub target: Option<TargetSpec>,
    #[serde(default)]
    pub seed_population: Option<SeedPopulation>,
    /// Permits `initial` different from the cell count.
    #[serde(default)]
    pub allow_unfair: bool,
    /// Worker threads; falls back to `QDSEP_WORKERS`, then to one per core.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(problem: ProblemSpec, algorithm: Algorithm, budget: Budget, trials: usize) -> Self {
        ExperimentConfig {
            problem,
            algorithm,
            budget,
            initial: None,
            trials,
            master_seed: 0,
            acceptance: Acceptance::Strict,
            target: None,
            seed_population: None,
            allow_unfair: false,
            workers: None,
        }
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.master_seed.wrapping_add(trial as u64)
    }

    pub fn from_toml_str(text: &str, source: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::toml(text, source, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml_str(&text, &path.display().to_string())?;
        if let ProblemSpec::File { path: inst } = &mut config.problem {
            if inst.is_relative() {
                if let Some(dir) = path.parent() {
                    *inst = dir.join(&*inst);
                }
            }
        }
        Ok(config)
    }
}
