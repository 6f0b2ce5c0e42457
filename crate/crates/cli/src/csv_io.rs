//! CSV serialization. Reals are written in Rust's shortest round-trip form,
//! so parsing a value back yields the identical `f64`.

use std::fmt::Write as _;
use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context, Result};

use ollga::algorithms::Algorithm;
use ollga::analysis::{summarize, RunStats};
use ollga::experiment::RunOutcome;
use ollga::trace::FixedTargetTable;
use ollga::tuning::{AuditEntry, ParamSpace, SweepCell};

pub const RUN_COLUMNS: [&str; 16] = [
    "algo",
    "n",
    "seed",
    "alpha",
    "beta",
    "gamma",
    "A",
    "b",
    "lambda1",
    "lambda2",
    "k",
    "c",
    "budget",
    "evaluations",
    "success",
    "final_fitness",
];

pub fn real(x: f64) -> String {
    format!("{x}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

/// One row of a runs CSV, as needed for statistics and pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub algo: String,
    pub n: usize,
    pub seed: u64,
    pub evaluations: u64,
    pub success: bool,
    pub final_fitness: usize,
}

pub fn write_runs<W: Write>(
    out: W,
    algo: &Algorithm,
    n: usize,
    budget: u64,
    outcomes: &[RunOutcome],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RUN_COLUMNS)?;
    let (d, s) = match algo {
        Algorithm::Dyn(c) | Algorithm::Switch { cfg: c, .. } => (Some(*c), None),
        Algorithm::Static(s) => (None, Some(*s)),
        Algorithm::Rls => (None, None),
    };
    for o in outcomes {
        w.write_record([
            algo.name().to_string(),
            n.to_string(),
            o.seed.to_string(),
            opt(d.map(|d| real(d.alpha))),
            opt(d.map(|d| real(d.beta))),
            opt(d.map(|d| real(d.gamma))),
            opt(d.map(|d| real(d.increase))),
            opt(d.map(|d| real(d.decrease))),
            opt(s.map(|s| s.lambda1)),
            opt(s.map(|s| s.lambda2)),
            opt(s.map(|s| s.k)),
            opt(s.map(|s| real(s.c))),
            budget.to_string(),
            o.result.evaluations.to_string(),
            o.result.success.to_string(),
            o.result.final_fitness.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_runs<R: Read>(input: R) -> Result<Vec<RunRow>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("runs CSV lacks column {name:?}"))
    };
    let (ia, inn, is, ie, iok, iff) = (
        col("algo")?,
        col("n")?,
        col("seed")?,
        col("evaluations")?,
        col("success")?,
        col("final_fitness")?,
    );
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let ctx = || format!("runs CSV record {}", line + 1);
        rows.push(RunRow {
            algo: field(ia).to_string(),
            n: field(inn).parse().with_context(ctx)?,
            seed: field(is).parse().with_context(ctx)?,
            evaluations: field(ie).parse().with_context(ctx)?,
            success: field(iok).parse().with_context(ctx)?,
            final_fitness: field(iff).parse().with_context(ctx)?,
        });
    }
    Ok(rows)
}

/// Summary over the successful runs, or `None` if there were none.
pub fn run_stats(rows: &[RunRow]) -> Result<Option<RunStats>> {
    let Some(first) = rows.first() else {
        bail!("no runs");
    };
    if rows.iter().any(|r| r.n != first.n) {
        bail!("runs have different dimensions");
    }
    let ok: Vec<f64> = rows
        .iter()
        .filter(|r| r.success)
        .map(|r| r.evaluations as f64)
        .collect();
    if ok.is_empty() {
        return Ok(None);
    }
    Ok(Some(summarize(&ok, first.n)?))
}

/// Human-readable summary; the same text for fresh runs and re-read CSVs.
pub fn stats_report(rows: &[RunRow]) -> Result<String> {
    let mut s = String::new();
    let successes = rows.iter().filter(|r| r.success).count();
    writeln!(s, "runs: {}", rows.len())?;
    writeln!(s, "successes: {successes}")?;
    if let Some(st) = run_stats(rows)? {
        writeln!(s, "mean: {}", real(st.mean))?;
        writeln!(s, "sd: {}", real(st.sd))?;
        writeln!(s, "rsd: {}", real(st.rsd))?;
        writeln!(s, "mean/n: {}", real(st.normalized_mean))?;
        for (q, v) in [
            ("q20", st.q20),
            ("q25", st.q25),
            ("q50", st.q50),
            ("q75", st.q75),
            ("q98", st.q98),
        ] {
            writeln!(s, "{q}: {}", real(v))?;
        }
    }
    Ok(s)
}

pub fn rows_from_outcomes(algo: &Algorithm, n: usize, outcomes: &[RunOutcome]) -> Vec<RunRow> {
    outcomes
        .iter()
        .map(|o| RunRow {
            algo: algo.name().to_string(),
            n,
            seed: o.seed,
            evaluations: o.result.evaluations,
            success: o.result.success,
            final_fitness: o.result.final_fitness,
        })
        .collect()
}

pub fn write_sweep<W: Write>(out: W, cells: &[SweepCell], display_cap: Option<f64>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "A",
        "b",
        "success_rate",
        "mean_successful",
        "success_count",
        "runs",
    ])?;
    for c in cells {
        w.write_record([
            real(c.increase),
            real(c.decrease),
            real(c.success_rate),
            real(c.display_mean(display_cap)),
            c.success_count.to_string(),
            c.runs.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_audit<W: Write>(out: W, space: &ParamSpace, audit: &[AuditEntry]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["iteration".to_string(), "config_id".to_string()];
    header.extend(space.params.iter().map(|p| p.name.clone()));
    header.extend(["seed", "evaluations", "censored"].map(String::from));
    w.write_record(&header)?;
    for a in audit {
        let mut rec = vec![a.iteration.to_string(), a.config_id.to_string()];
        rec.extend(a.values.iter().map(|&v| real(v)));
        rec.extend([
            a.seed.to_string(),
            a.evaluations.to_string(),
            a.censored.to_string(),
        ]);
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Fixed-target table plus its smoothed gradient (empty where undefined).
pub fn write_fixed_target<W: Write>(
    out: W,
    table: &FixedTargetTable,
    gradient: &[(usize, f64)],
) -> Result<()> {
    let grad: std::collections::HashMap<usize, f64> = gradient.iter().copied().collect();
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "target",
        "avg_evals",
        "hit_count",
        "avg_lambda1",
        "gradient",
    ])?;
    for r in &table.rows {
        w.write_record([
            r.target.to_string(),
            opt(r.avg_evals.map(real)),
            r.hit_count.to_string(),
            opt(r.avg_lambda1.map(real)),
            opt(grad.get(&r.target).map(|&g| real(g))),
        ])?;
    }
    w.flush()?;
    Ok(())
}
