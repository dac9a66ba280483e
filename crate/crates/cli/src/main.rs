use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qdsep::analysis::{
    approximation_ratio, brute_force_opt, escape_radius, gamma_min, TabulatedSetFunction, ENUMERATION_GUARD,
    ESCAPE_GUARD, TABULATION_GUARD,
};
use qdsep::harness::{
    export_report, resolve_opt, run_experiment, AnyProblem, Algorithm, Budget, ExperimentConfig, ExperimentReport,
    ProblemSpec, ReportFormat, SeedPopulation, TargetLevel, TargetSpec, WORKERS_ENV,
};
use qdsep::instances::{
    random_max_coverage, random_set_cover, read_instance, write_instance, Example1Params, Example2Params, Instance,
    LabeledInstance, Origin,
};
use qdsep::verify::{run_criterion, CRITERIA};
use qdsep::{Error, Problem, RandomSource, Solution};

#[derive(Parser)]
#[command(name = "qdsep", version, about = "MAP-Elites versus the (mu+1)-EA on coverage problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file.
    GenInstance {
        #[command(subcommand)]
        which: GenInstance,
    },
    /// Run a multi-trial experiment.
    Run(RunArgs),
    /// Exact optimum of a small instance.
    Oracle {
        instance: PathBuf,
    },
    /// Evaluate one solution on an instance.
    Analyze {
        instance: PathBuf,
        #[arg(long)]
        solution: Solution,
    },
    /// Run the built-in acceptance suite.
    Verify {
        /// Only these criteria (default: all).
        #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=7))]
        criteria: Vec<u8>,
    },
}

#[derive(Subcommand)]
enum GenInstance {
    /// Bipartite max-coverage trap.
    Example1 {
        #[arg(long)]
        n: usize,
        /// delta as a fraction `num/den`.
        #[arg(long, default_value = "1/10")]
        delta: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Star set-cover trap.
    Example2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random instance with independent element memberships.
    Random {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.2)]
        density: f64,
        /// Cardinality bound (max coverage).
        #[arg(long)]
        k: Option<usize>,
        /// Weights are drawn from 1..=max-weight (set cover).
        #[arg(long, default_value_t = 10)]
        max_weight: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    MaxCoverage,
    SetCover,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    MapElites,
    Ea,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedArg {
    Local,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML). Flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, value_enum)]
    algo: Option<AlgoArg>,
    /// Evaluations per trial.
    #[arg(long, conflicts_with = "budget_multiplier")]
    budget: Option<u64>,
    /// Budget from the runtime bound times this constant.
    #[arg(long)]
    budget_multiplier: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    master_seed: Option<u64>,
    /// `I` or `mu`; must equal the cell count unless --allow-unfair.
    #[arg(long)]
    initial: Option<usize>,
    #[arg(long)]
    allow_unfair: bool,
    #[arg(long, value_enum)]
    seed_population: Option<SeedArg>,
    #[arg(long, conflicts_with = "target_fitness")]
    target_ratio: Option<f64>,
    #[arg(long)]
    target_fitness: Option<f64>,
    #[arg(long)]
    target_cell: Option<usize>,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Write the per-trial rows here.
    #[arg(long)]
    rows: Option<PathBuf>,
    /// Write the full JSON report here.
    #[arg(long)]
    document: Option<PathBuf>,
}

fn parse_fraction(s: &str) -> qdsep::Result<(u64, u64)> {
    let bad = || Error::Config(format!("expected a fraction like 1/10, got {s:?}"));
    let (a, b) = s.split_once('/').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn gen_instance(which: GenInstance) -> qdsep::Result<()> {
    let (labeled, out) = match which {
        GenInstance::Example1 { n, delta, out } => {
            let (num, den) = parse_fraction(&delta)?;
            (LabeledInstance::from_origin(Origin::Example1(Example1Params::new(n, num, den)?))?, out)
        }
        GenInstance::Example2 { n, out } => {
            (LabeledInstance::from_origin(Origin::Example2(Example2Params::new(n)?))?, out)
        }
        GenInstance::Random {
            kind,
            n,
            m,
            density,
            k,
            max_weight,
            seed,
            out,
        } => {
            let mut rng = RandomSource::new(seed);
            let inst = match kind {
                Kind::MaxCoverage => {
                    let k = k.ok_or_else(|| Error::Config("--k is required for max-coverage".into()))?;
                    Instance::MaxCoverage(random_max_coverage(n, m, density, k, &mut rng)?)
                }
                Kind::SetCover => Instance::SetCover(random_set_cover(n, m, density, max_weight, &mut rng)?),
            };
            (inst.into(), out)
        }
    };
    write_instance(&labeled, &out)?;
    println!(
        "wrote {} instance, n={}, m={} to {}",
        labeled.instance.kind(),
        labeled.instance.n(),
        labeled.instance.m_elements(),
        out.display()
    );
    Ok(())
}

fn build_config(args: &RunArgs) -> qdsep::Result<ExperimentConfig> {
    let missing = |flag: &str| Error::Config(format!("{flag} is required without --config"));
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let path = args.instance.clone().ok_or_else(|| missing("--instance"))?;
            let algo = args.algo.ok_or_else(|| missing("--algo"))?;
            let budget = match (args.budget, args.budget_multiplier) {
                (Some(b), _) => Budget::Evaluations(b),
                (None, Some(m)) => Budget::Bound { multiplier: m },
                (None, None) => return Err(missing("--budget or --budget-multiplier")),
            };
            let algorithm = match algo {
                AlgoArg::MapElites => Algorithm::MapElites,
                AlgoArg::Ea => Algorithm::Ea,
            };
            ExperimentConfig::new(ProblemSpec::File { path }, algorithm, budget, 1)
        }
    };
    if args.config.is_some() {
        if let Some(path) = &args.instance {
            config.problem = ProblemSpec::File { path: path.clone() };
        }
        if let Some(a) = args.algo {
            config.algorithm = match a {
                AlgoArg::MapElites => Algorithm::MapElites,
                AlgoArg::Ea => Algorithm::Ea,
            };
        }
        if let Some(b) = args.budget {
            config.budget = Budget::Evaluations(b);
        }
        if let Some(m) = args.budget_multiplier {
            config.budget = Budget::Bound { multiplier: m };
        }
    }
    if let Some(t) = args.trials {
        config.trials = t;
    }
    if let Some(s) = args.master_seed {
        config.master_seed = s;
    }
    if args.initial.is_some() {
        config.initial = args.initial;
    }
    config.allow_unfair |= args.allow_unfair;
    if let Some(SeedArg::Local) = args.seed_population {
        config.seed_population = Some(SeedPopulation::Local);
    }
    let level = match (args.target_ratio, args.target_fitness) {
        (Some(r), _) => Some(TargetLevel::Ratio(r)),
        (None, Some(f)) => Some(TargetLevel::Fitness(f)),
        (None, None) => None,
    };
    if let Some(level) = level {
        config.target = Some(TargetSpec {
            level,
            cell: args.target_cell,
            require_feasible: true,
        });
    } else if let (Some(c), Some(t)) = (args.target_cell, config.target.as_mut()) {
        t.cell = Some(c);
    } else if args.target_cell.is_some() {
        return Err(Error::Config("--target-cell needs a target level".into()));
    }
    if args.workers.is_some() {
        config.workers = args.workers;
    }
    Ok(config)
}

fn print_summary(r: &ExperimentReport) {
    let a = &r.aggregate;
    let fmt = |v: Option<f64>| v.map(|v| format!("{v}")).unwrap_or_else(|| "-".into());
    println!(
        "{} on {} (n={}, cells={}), budget {} evaluations, {} trials",
        match r.config.algorithm {
            Algorithm::MapElites => "map-elites",
            Algorithm::Ea => "ea",
        },
        r.problem_kind,
        r.n,
        r.cell_count,
        r.budget,
        r.trials.len()
    );
    println!("OPT={}", fmt(r.opt.map(|o| o.0)));
    println!("successes={}/{}", a.successes, r.trials.len());
    println!("median_first_hit={}", fmt(a.median_first_hit));
    println!("mean_first_hit={}", fmt(a.mean_first_hit));
    println!("best_ratio={}", fmt(a.best_ratio));
    println!("median_ratio={}", fmt(a.median_ratio));
}

fn run(args: RunArgs) -> qdsep::Result<()> {
    let config = build_config(&args)?;
    let report = run_experiment(&config)?;
    if let Some(p) = &args.rows {
        export_report(&report, p, ReportFormat::Rows)?;
    }
    if let Some(p) = &args.document {
        export_report(&report, p, ReportFormat::Document)?;
    }
    print_summary(&report);
    Ok(())
}

fn oracle(path: PathBuf) -> qdsep::Result<()> {
    let labeled = read_instance(&path)?;
    let n = labeled.instance.n();
    if n > ENUMERATION_GUARD {
        if let Some((opt, _)) = resolve_opt(&labeled)? {
            println!("OPT={opt} (closed form; n={n} is too large to enumerate)");
            return Ok(());
        }
    }
    let problem = AnyProblem::from(labeled.instance.clone());
    let r = brute_force_opt(&problem)?;
    println!("OPT={}", r.opt);
    println!("optimum={}", r.optimal_solution);
    println!("optima={}", r.count_of_optima);
    if let Instance::MaxCoverage(inst) = &labeled.instance {
        if n <= TABULATION_GUARD {
            let table = TabulatedSetFunction::from_function(inst)?;
            println!("gamma_min={}", gamma_min(&table, inst.k())?);
        }
    }
    Ok(())
}

fn analyze(path: PathBuf, x: Solution) -> qdsep::Result<()> {
    let labeled = read_instance(&path)?;
    let problem = AnyProblem::from(labeled.instance.clone());
    let e = problem.assess(&x)?;
    println!("fitness={}", e.fitness);
    println!("descriptor={}", e.cell);
    println!("feasible={}", e.feasible);
    if problem.dimension() <= ESCAPE_GUARD {
        println!("escape_radius={}", escape_radius(&x, &problem)?);
    }
    if let Some((opt, _)) = resolve_opt(&labeled)? {
        if e.feasible && opt.0 > 0.0 {
            println!("ratio={}", approximation_ratio(e.fitness, opt, problem.direction())?);
        }
    }
    Ok(())
}

fn verify(criteria: Vec<u8>) -> bool {
    let selected = if criteria.is_empty() { CRITERIA.to_vec() } else { criteria };
    let mut all = true;
    for c in selected {
        let outcome = run_criterion(c).expect("range checked by clap");
        println!("{outcome}");
        all &= outcome.passed;
    }
    all
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::GenInstance { which } => gen_instance(which),
        Command::Run(args) => run(args),
        Command::Oracle { instance } => oracle(instance),
        Command::Analyze { instance, solution } => analyze(instance, solution),
        Command::Verify { criteria } => {
            return if verify(criteria) { ExitCode::SUCCESS } else { ExitCode::from(2) };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
