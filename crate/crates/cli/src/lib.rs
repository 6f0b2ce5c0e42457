//! Command-line surface of the ollga experiments.

pub mod args;
pub mod csv_io;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ollga::algorithms::{Algorithm, DynConfig, StaticConfig, TraceOptions};
use ollga::analysis::{
    ft_crossing, ft_gradient, paired_t_test, wilcoxon_signed_rank, CrossingMode, TestReport,
    DEFAULT_GRADIENT_WINDOW,
};
use ollga::experiment::{run_batch, RunOutcome, DEFAULT_BUDGET};
use ollga::trace::{aggregate_fixed_target, FixedTargetTable};
use ollga::tuning::{
    grid_sweep, race_tune, AlgorithmTarget, Family, GridAxis, Param, ParamSpace, SweepSpec,
    TunerSettings,
};

use args::{AlgoArgs, RunArgs};
use csv_io::{
    read_runs, real, rows_from_outcomes, stats_report, write_audit, write_fixed_target, write_runs,
    write_sweep,
};

#[derive(Parser, Debug)]
#[command(name = "ollga", version, about = "(1+(λ,λ)) GA experiments on OneMax")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Independent runs of one algorithm; writes a runs CSV and prints statistics.
    Run {
        #[command(flatten)]
        algo: AlgoArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Runs CSV (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also record fixed-target traces and write their table here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Grid over the update strengths (A, b); writes a heatmap CSV.
    Sweep {
        #[arg(long = "A-count", default_value_t = 50)]
        a_count: usize,
        #[arg(long = "A-min", default_value_t = 1.02)]
        a_min: f64,
        #[arg(long = "A-max", default_value_t = 2.0)]
        a_max: f64,
        #[arg(long = "b-count", default_value_t = 50)]
        b_count: usize,
        #[arg(long = "b-min", default_value_t = 0.4)]
        b_min: f64,
        #[arg(long = "b-max", default_value_t = 0.988)]
        b_max: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        runs: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Clamp the reported means at this value (for plotting).
        #[arg(long)]
        display_cap: Option<f64>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterated racing over a parameter space; prints the best configuration.
    Tune {
        #[arg(long, value_enum, default_value_t = FamilyArg::Dyn)]
        family: FamilyArg,
        /// Predefined space: `update` (A, b) or `full` (all parameters).
        #[arg(long, value_enum, default_value_t = SpaceArg::Update)]
        space: SpaceArg,
        /// Custom parameter range `NAME=LO:HI`, repeatable; replaces `--space`.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Preset supplying the values of parameters that are not tuned.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        n: usize,
        /// Evaluation budget of a single run.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Total evaluation budget of the tuner.
        #[arg(long, default_value_t = 50_000_000)]
        tune_budget: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        /// Audit log of every tuning run.
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Fixed-target table with gradients, optionally compared to a second algorithm.
    FixedTarget {
        #[command(flatten)]
        algo: AlgoArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Preset to compare against; prints both crossing targets.
        #[arg(long)]
        compare_preset: Option<String>,
        /// Moving-average width of the gradient.
        #[arg(long, default_value_t = DEFAULT_GRADIENT_WINDOW)]
        window: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Table of the comparison algorithm.
        #[arg(long)]
        compare_out: Option<PathBuf>,
    },
    /// Paired t-test and Wilcoxon signed-rank test on two runs CSVs.
    Compare { a: PathBuf, b: PathBuf },
    /// Statistics of a runs CSV.
    Stats { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Dyn,
    Static,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Update,
    Full,
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        None => f(),
        Some(0) => bail!("--jobs must be >= 1"),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()?
            .install(f),
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            algo,
            run,
            jobs,
            out,
            trace,
        } => cmd_run(&algo, &run, jobs, out.as_deref(), trace.as_deref()),
        Command::Sweep {
            a_count,
            a_min,
            a_max,
            b_count,
            b_min,
            b_max,
            alpha,
            beta,
            gamma,
            n,
            runs,
            budget,
            seed,
            display_cap,
            jobs,
            out,
        } => {
            let spec = SweepSpec {
                increase: GridAxis::new(a_count, a_min, a_max),
                decrease: GridAxis::new(b_count, b_min, b_max),
                runs,
                n,
                budget,
                display_cap,
            };
            let template = DynConfig {
                alpha,
                beta,
                gamma,
                ..DynConfig::default_rule()
            };
            let cells = with_jobs(jobs, || Ok(grid_sweep(&spec, &template, seed)?))?;
            write_sweep(sink(out.as_deref())?, &cells, display_cap)
        }
        Command::Tune {
            family,
            space,
            params,
            preset,
            n,
            budget,
            tune_budget,
            seed,
            jobs,
            audit,
        } => cmd_tune(
            family,
            space,
            &params,
            preset.as_deref(),
            n,
            budget,
            tune_budget,
            seed,
            jobs,
            audit.as_deref(),
        ),
        Command::FixedTarget {
            algo,
            run,
            compare_preset,
            window,
            jobs,
            out,
            compare_out,
        } => cmd_fixed_target(
            &algo,
            &run,
            compare_preset.as_deref(),
            window,
            jobs,
            out.as_deref(),
            compare_out.as_deref(),
        ),
        Command::Compare { a, b } => cmd_compare(&a, &b),
        Command::Stats { file } => {
            let rows = read_runs(
                File::open(&file).with_context(|| format!("cannot read {}", file.display()))?,
            )?;
            print!("{}", stats_report(&rows)?);
            Ok(())
        }
    }
}

fn batch(
    algo: &Algorithm,
    run: &RunArgs,
    opts: TraceOptions,
    jobs: Option<usize>,
) -> Result<Vec<RunOutcome>> {
    run.validate()?;
    with_jobs(jobs, || {
        Ok(run_batch(
            algo, run.n, run.budget, run.runs, run.seed, opts,
        )?)
    })
}

fn fixed_target_table(outcomes: &[RunOutcome], n: usize) -> Result<FixedTargetTable> {
    let traces: Vec<_> = outcomes
        .iter()
        .map(|o| {
            o.result
                .trace
                .clone()
                .ok_or_else(|| anyhow!("run without trace"))
        })
        .collect::<Result<_>>()?;
    Ok(aggregate_fixed_target(&traces, n)?)
}

fn cmd_run(
    algo: &AlgoArgs,
    run: &RunArgs,
    jobs: Option<usize>,
    out: Option<&Path>,
    trace: Option<&Path>,
) -> Result<()> {
    let algorithm = algo.resolve()?;
    algorithm.validate(run.n)?;
    let opts = if trace.is_some() {
        TraceOptions::FIXED_TARGET
    } else {
        TraceOptions::NONE
    };
    let outcomes = batch(&algorithm, run, opts, jobs)?;
    write_runs(sink(out)?, &algorithm, run.n, run.budget, &outcomes)?;
    if let Some(path) = trace {
        let table = fixed_target_table(&outcomes, run.n)?;
        let gradient = ft_gradient(&table, DEFAULT_GRADIENT_WINDOW).unwrap_or_default();
        write_fixed_target(sink(Some(path))?, &table, &gradient)?;
    }
    let report = stats_report(&rows_from_outcomes(&algorithm, run.n, &outcomes))?;
    if out.is_some() {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
    Ok(())
}

fn parse_param(spec: &str) -> Result<Param> {
    let (name, range) = spec
        .split_once('=')
        .ok_or_else(|| anyhow!("--param expects NAME=LO:HI, got {spec:?}"))?;
    let (lo, hi) = range
        .split_once(':')
        .ok_or_else(|| anyhow!("--param expects NAME=LO:HI, got {spec:?}"))?;
    Ok(match name {
        "lambda1" | "lambda2" | "k" => Param::integer(name, lo.trim().parse()?, hi.trim().parse()?),
        _ => Param::real(name, lo.trim().parse()?, hi.trim().parse()?),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_tune(
    family: FamilyArg,
    space: SpaceArg,
    params: &[String],
    preset: Option<&str>,
    n: usize,
    budget: u64,
    tune_budget: u64,
    seed: u64,
    jobs: Option<usize>,
    audit: Option<&Path>,
) -> Result<()> {
    if n < 2 {
        bail!("--n must be >= 2, got {n}");
    }
    let base = preset.map(|p| AlgoArgs::preset(p).resolve()).transpose()?;
    let fam = match (family, base) {
        (FamilyArg::Dyn, None) => Family::Dyn(DynConfig::default_rule()),
        (FamilyArg::Dyn, Some(Algorithm::Dyn(c))) => Family::Dyn(c),
        (FamilyArg::Static, None) => Family::Static(StaticConfig::new(5, 60, 7, 0.0143)?),
        (FamilyArg::Static, Some(Algorithm::Static(s))) => Family::Static(s),
        _ => bail!("preset does not belong to the tuned family"),
    };
    let space = if !params.is_empty() {
        ParamSpace::new(
            params
                .iter()
                .map(|p| parse_param(p))
                .collect::<Result<_>>()?,
        )?
    } else {
        match (family, space) {
            (FamilyArg::Dyn, SpaceArg::Update) => ParamSpace::dyn_update_strengths(),
            (FamilyArg::Dyn, SpaceArg::Full) => ParamSpace::dyn_full(),
            (FamilyArg::Static, _) => ParamSpace::static_full(n),
        }
    };
    let target = AlgorithmTarget::new(fam, &space, n, budget)?;
    let outcome = with_jobs(jobs, || {
        Ok(race_tune(
            &space,
            &target,
            tune_budget,
            seed,
            &TunerSettings::default(),
        )?)
    })?;
    if let Some(path) = audit {
        write_audit(sink(Some(path))?, &space, &outcome.audit)?;
    }
    let mut out = io::stdout().lock();
    if outcome.warning {
        writeln!(out, "warning: budget exhausted before the best configuration was tested on enough instances")?;
    }
    for (p, v) in space.params.iter().zip(&outcome.best.values) {
        writeln!(out, "{}: {}", p.name, real(*v))?;
    }
    if let Algorithm::Dyn(c) = target.algorithm(&outcome.best.values)? {
        writeln!(
            out,
            "success_rate: {}",
            real(ollga::analysis::success_rate(c.increase, c.decrease)?)
        )?;
    }
    writeln!(out, "mean: {}", real(outcome.best.mean))?;
    writeln!(out, "instances: {}", outcome.best.instances)?;
    writeln!(out, "iterations: {}", outcome.iterations)?;
    writeln!(out, "evaluations: {}", outcome.consumed)?;
    Ok(())
}

fn cmd_fixed_target(
    algo: &AlgoArgs,
    run: &RunArgs,
    compare: Option<&str>,
    window: usize,
    jobs: Option<usize>,
    out: Option<&Path>,
    compare_out: Option<&Path>,
) -> Result<()> {
    let algorithm = algo.resolve()?;
    algorithm.validate(run.n)?;
    let table = fixed_target_table(
        &batch(&algorithm, run, TraceOptions::FIXED_TARGET, jobs)?,
        run.n,
    )?;
    let gradient = ft_gradient(&table, window)?;
    write_fixed_target(sink(out)?, &table, &gradient)?;
    let Some(name) = compare else {
        return Ok(());
    };
    let other = AlgoArgs::preset(name).resolve()?;
    other.validate(run.n)?;
    let other_table = fixed_target_table(
        &batch(&other, run, TraceOptions::FIXED_TARGET, jobs)?,
        run.n,
    )?;
    if let Some(p) = compare_out {
        write_fixed_target(
            sink(Some(p))?,
            &other_table,
            &ft_gradient(&other_table, window)?,
        )?;
    }
    // The report goes to stderr when the table occupies stdout.
    let mut report: Box<dyn Write> = if out.is_some() {
        Box::new(io::stdout().lock())
    } else {
        Box::new(io::stderr().lock())
    };
    for (label, mode) in [
        ("first-hit", CrossingMode::FirstHit),
        ("gradient", CrossingMode::Gradient),
    ] {
        let v = ft_crossing(&other_table, &table, mode, window)?;
        writeln!(
            report,
            "crossing ({label}): {} ({name} never worse than {} from this target on)",
            v.map_or_else(|| "none".to_string(), |v| v.to_string()),
            algorithm.name()
        )?;
    }
    Ok(())
}

fn print_report(out: &mut impl Write, name: &str, r: &TestReport) -> Result<()> {
    let levels: Vec<String> = r.significant_at.iter().map(|l| l.to_string()).collect();
    writeln!(
        out,
        "{name}: statistic {} p-value {} significant at [{}]{}",
        real(r.statistic),
        real(r.p_value),
        levels.join(", "),
        if r.degenerate { " (degenerate)" } else { "" }
    )?;
    Ok(())
}

fn cmd_compare(a: &Path, b: &Path) -> Result<()> {
    let open = |p: &Path| -> Result<_> {
        read_runs(File::open(p).with_context(|| format!("cannot read {}", p.display()))?)
    };
    let (ra, rb) = (open(a)?, open(b)?);
    if ra.len() != rb.len() {
        bail!(ollga::Error::Pairing(format!(
            "{} runs vs {} runs",
            ra.len(),
            rb.len()
        )));
    }
    if let Some(i) = ra.iter().zip(&rb).position(|(x, y)| x.seed != y.seed) {
        bail!(ollga::Error::Pairing(format!(
            "row {} has seed {} in one file and {} in the other",
            i + 1,
            ra[i].seed,
            rb[i].seed
        )));
    }
    let ea: Vec<f64> = ra.iter().map(|r| r.evaluations as f64).collect();
    let eb: Vec<f64> = rb.iter().map(|r| r.evaluations as f64).collect();
    let mut out = io::stdout().lock();
    writeln!(out, "pairs: {}", ea.len())?;
    writeln!(
        out,
        "mean a: {}",
        real(ea.iter().sum::<f64>() / ea.len() as f64)
    )?;
    writeln!(
        out,
        "mean b: {}",
        real(eb.iter().sum::<f64>() / eb.len() as f64)
    )?;
    print_report(&mut out, "paired t-test", &paired_t_test(&ea, &eb)?)?;
    match wilcoxon_signed_rank(&ea, &eb) {
        Ok(r) => print_report(&mut out, "wilcoxon signed-rank", &r)?,
        Err(e) => writeln!(out, "wilcoxon signed-rank: {e}")?,
    }
    Ok(())
}
