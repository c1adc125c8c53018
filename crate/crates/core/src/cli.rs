//! `capgraph` command-line front end.
//!
//! Subcommands: `formulas`, `simulate`, `sweep`, `coverage`. Every flag can be
//! set through an environment variable named `CAPGRAPH_<FLAG>` (for example
//! `CAPGRAPH_TRIALS`); command-line flags win.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 I/O error, 4 a claim
//! verdict failed under `sweep --check`.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::error::Error;
use crate::graph::build_graph_zoned;
use crate::model::{self, regime_classify, ModelParams};
use crate::monte_carlo::{
    coverage_probability, regime_sweep, run_ensemble, EnsembleSummary, PoissonTable, RegimeReport,
    SweepConfig, DEFAULT_DELTA,
};
use crate::sphere::RandomStream;

/// Master seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x5EED_CA95_0000_0001;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_VERDICT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0} claim verdict(s) failed")]
    VerdictFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Domain(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::VerdictFailed(_) => EXIT_VERDICT,
        }
    }
}

fn io_err(path: impl AsRef<Path>) -> impl FnOnce(io::Error) -> CliError {
    let path = path.as_ref().display().to_string();
    move |source| CliError::Io { path, source }
}

#[derive(Debug, Parser)]
#[command(
    name = "capgraph",
    version,
    about = "Random intersection graphs of spherical caps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every closed-form quantity for one parameter set.
    Formulas(FormulasArgs),
    /// Run one seeded ensemble and write a JSON summary.
    Simulate(SimulateArgs),
    /// Run ensembles over an (n, alpha) grid and check the regime claims.
    Sweep(SweepArgs),
    /// Estimate the probability that the caps cover a test grid.
    Coverage(CoverageArgs),
}

/// `--p` or the pair `--c`/`--alpha`, never both.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ParamArgs {
    /// Number of caps.
    #[arg(long, env = "CAPGRAPH_N")]
    pub n: u64,
    /// Cap area fraction (cap area is 4πp).
    #[arg(long, env = "CAPGRAPH_P", conflicts_with_all = ["c", "alpha"], required_unless_present_all = ["c", "alpha"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Scale in p = c / n^alpha.
    #[arg(long, env = "CAPGRAPH_C", requires = "alpha")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Exponent in p = c / n^alpha.
    #[arg(
        long,
        env = "CAPGRAPH_ALPHA",
        requires = "c",
        allow_negative_numbers = true
    )]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl ParamArgs {
    pub fn model(&self) -> Result<ModelParams, CliError> {
        match (self.p, self.c, self.alpha) {
            (Some(p), None, None) => Ok(ModelParams::new(self.n, p)?),
            (None, Some(c), Some(alpha)) => Ok(ModelParams::from_alpha(self.n, c, alpha)?),
            _ => Err(CliError::Usage(
                "give exactly one of --p or --c together with --alpha".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FormulasArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Write the report here instead of stdout.
    #[arg(long, env = "CAPGRAPH_OUT")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    #[arg(long, env = "CAPGRAPH_TRIALS", default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, env = "CAPGRAPH_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long, env = "CAPGRAPH_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// JSON summary path (stdout when absent).
    #[arg(long, env = "CAPGRAPH_OUT")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Write the edge-count pmf table as CSV to this path.
    #[arg(long, env = "CAPGRAPH_EMIT_PMF")]
    #[serde(skip)]
    pub emit_pmf: Option<PathBuf>,
    /// Write the edge list of trial 0 ("i j" per line) to this path.
    #[arg(long, env = "CAPGRAPH_DUMP_EDGES")]
    #[serde(skip)]
    pub dump_edges: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Comma-separated vertex counts.
    #[arg(long, env = "CAPGRAPH_N_LIST", value_delimiter = ',', required = true)]
    pub n_list: Vec<u64>,
    /// Comma-separated exponents.
    #[arg(
        long,
        env = "CAPGRAPH_ALPHA_GRID",
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub alpha_grid: Vec<f64>,
    #[arg(long, env = "CAPGRAPH_C", default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, env = "CAPGRAPH_TRIALS", default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, env = "CAPGRAPH_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Verdict slack: an almost-sure event must occur in ≥ 1 − delta of trials.
    #[arg(long, env = "CAPGRAPH_DELTA", default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[arg(long, env = "CAPGRAPH_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// CSV path (stdout when absent).
    #[arg(long, env = "CAPGRAPH_OUT")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Also write the full report as JSON.
    #[arg(long, env = "CAPGRAPH_JSON")]
    #[serde(skip)]
    pub json: Option<PathBuf>,
    /// Exit with status 4 if any verdict fails.
    #[arg(long, env = "CAPGRAPH_CHECK")]
    pub check: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoverageArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    #[arg(long, env = "CAPGRAPH_TRIALS", default_value_t = 200)]
    pub trials: u64,
    /// Size of the Fibonacci test grid.
    #[arg(long, env = "CAPGRAPH_GRID_POINTS", default_value_t = 5000)]
    pub grid_points: usize,
    #[arg(long, env = "CAPGRAPH_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, env = "CAPGRAPH_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long, env = "CAPGRAPH_OUT")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// Header shared by every JSON artifact.
#[derive(Debug, Serialize)]
struct Artifact<'a, C: Serialize, R: Serialize> {
    artifact: &'static str,
    version: &'static str,
    command: &'static str,
    master_seed: Option<u64>,
    config: &'a C,
    result: R,
}

fn artifact_json<C: Serialize, R: Serialize>(
    command: &'static str,
    master_seed: Option<u64>,
    config: &C,
    result: R,
) -> String {
    let a = Artifact {
        artifact: "capgraph",
        version: env!("CARGO_PKG_VERSION"),
        command,
        master_seed,
        config,
        result,
    };
    let mut s = serde_json::to_string_pretty(&a).expect("artifact serializes");
    s.push('\n');
    s
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(io_err("<stdout>")),
    }
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// reports that have no `--out` path to `stdout`.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(cli, stdout)
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Formulas(a) => cmd_formulas(&a, stdout),
        Command::Simulate(a) => cmd_simulate(&a, stdout),
        Command::Sweep(a) => cmd_sweep(&a, stdout),
        Command::Coverage(a) => cmd_coverage(&a, stdout),
    }
}

/// Text report of every closed-form quantity, one `key = value` per line.
pub fn formulas_report(m: &ModelParams) -> Result<String, CliError> {
    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| x.to_string());

    line("n", m.n.to_string());
    if let (Some(c), Some(alpha)) = (m.c, m.alpha) {
        line("c", c.to_string());
        line("alpha", alpha.to_string());
    }
    line("p", m.p.to_string());
    line("a", m.a.to_string());
    line("q", m.q.to_string());
    line("lambda", m.lambda.to_string());
    line(
        "expected_edges",
        model::expected_edge_count(m.n, m.p)?.to_string(),
    );
    line(
        "expected_isolated",
        opt((m.n >= 1)
            .then(|| model::expected_isolated_count(m.n, m.p))
            .transpose()?),
    );

    if m.n >= 2 {
        let cs = model::chen_stein_bounds(m.n, m.p)?;
        line("chen_stein.prefactor", cs.prefactor.to_string());
        line("chen_stein.b1", cs.b1.to_string());
        line("chen_stein.b2", cs.b2.to_string());
        line("chen_stein.bound_paper", cs.bound_paper.to_string());
        line("chen_stein.bound_corrected", cs.bound_corrected.to_string());
        let raw = model::isolated_exists_union_bound(m.n, m.p)?;
        line("isolated_exists_bound_raw", raw.to_string());
        line("isolated_exists_bound", raw.min(1.0).to_string());
        line(
            "all_isolated_formula",
            model::all_isolated_upper_bound(m.n, m.p)?.to_string(),
        );
    } else {
        for k in [
            "chen_stein.bound_paper",
            "chen_stein.bound_corrected",
            "isolated_exists_bound",
            "all_isolated_formula",
        ] {
            line(k, "n/a".into());
        }
    }
    let e = model::expected_edge_count(m.n, m.p)?;
    line("edge_existence_bound_raw", e.to_string());
    line("edge_existence_bound", e.min(1.0).to_string());
    line("coverage_ratio", opt(model::coverage_ratio(m.n, m.p)?));

    // With p given directly, classify by the exponent it implies at c = 1.
    let alpha = m
        .alpha
        .or_else(|| (m.n >= 2 && m.p > 0.0).then(|| -m.p.ln() / (m.n as f64).ln()));
    match alpha {
        Some(alpha) => {
            if m.alpha.is_none() {
                line("implied_alpha", alpha.to_string());
            }
            let labels: Vec<_> = regime_classify(alpha).iter().map(|c| c.label()).collect();
            line("regime", labels.join(","));
        }
        None => line("regime", "n/a".into()),
    }
    Ok(s)
}

pub fn cmd_formulas(a: &FormulasArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let m = a.params.model()?;
    emit(a.out.as_deref(), &formulas_report(&m)?, stdout)
}

#[derive(Debug, Serialize)]
struct SimulateResult<'a> {
    summary: &'a EnsembleSummary,
    bound_paper: Option<f64>,
    bound_corrected: Option<f64>,
    tv_within_corrected_bound: Option<bool>,
}

pub fn pmf_csv(s: &EnsembleSummary) -> Result<String, CliError> {
    let poisson = PoissonTable::new(s.params.lambda)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# capgraph {} simulate n={} p={} trials={} seed={}",
        env!("CARGO_PKG_VERSION"),
        s.params.n,
        fmt_f64(s.params.p),
        s.r,
        s.master_seed
    );
    out.push_str("edges,trials,probability,poisson\n");
    for (&k, &count) in &s.edge_counts {
        let _ = writeln!(
            out,
            "{k},{count},{},{}",
            fmt_f64(s.pmf[&k]),
            fmt_f64(poisson.pmf(k))
        );
    }
    Ok(out)
}

pub fn cmd_simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let m = a.params.model()?;
    let summary = with_threads(a.threads, || run_ensemble(&m, a.trials, a.seed))??;
    let bounds = (m.n >= 2)
        .then(|| model::chen_stein_bounds(m.n, m.p))
        .transpose()?;
    let result = SimulateResult {
        summary: &summary,
        bound_paper: bounds.map(|b| b.bound_paper),
        bound_corrected: bounds.map(|b| b.bound_corrected),
        tv_within_corrected_bound: bounds
            .map(|b| summary.tv_distance <= b.bound_corrected + summary.tv_mc_error),
    };
    let json = artifact_json("simulate", Some(a.seed), a, result);

    if let Some(path) = &a.emit_pmf {
        fs::write(path, pmf_csv(&summary)?).map_err(io_err(path))?;
    }
    if let Some(path) = &a.dump_edges {
        let n = usize::try_from(m.n).map_err(|_| CliError::Usage("n too large".into()))?;
        let centers = RandomStream::new(a.seed, 0).unit_vectors(n);
        let g = build_graph_zoned(&centers, m.a)?;
        fs::write(path, g.edge_list_string()).map_err(io_err(path))?;
    }
    emit(a.out.as_deref(), &json, stdout)
}

pub const SWEEP_COLUMNS: [&str; 18] = [
    "n",
    "c",
    "alpha",
    "p",
    "q",
    "lambda",
    "mean_edges",
    "var_edges",
    "mean_isolated",
    "tv_distance",
    "tv_mc_error",
    "bound_paper",
    "bound_corrected",
    "frac_no_isolated",
    "frac_all_isolated",
    "frac_no_edges",
    "frac_half_n_edges",
    "verdicts",
];

/// Sweep table. The `verdicts` column holds `CLAIM=VERDICT` items joined by
/// `;`.
pub fn sweep_csv(report: &RegimeReport) -> String {
    let cfg = &report.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# capgraph {} sweep c={} trials={} seed={} delta={}",
        env!("CARGO_PKG_VERSION"),
        fmt_f64(cfg.c),
        cfg.r,
        cfg.master_seed,
        fmt_f64(cfg.delta)
    );
    out.push_str(&SWEEP_COLUMNS.join(","));
    out.push('\n');
    for row in &report.rows {
        let s = &row.summary;
        let verdicts: Vec<String> = row
            .verdicts
            .iter()
            .map(|(c, v)| format!("{}={}", c.label(), v.label()))
            .collect();
        let fields = [
            row.n.to_string(),
            fmt_f64(row.c),
            fmt_f64(row.alpha),
            fmt_f64(row.p),
            fmt_f64(row.q),
            fmt_f64(row.lambda),
            fmt_f64(s.mean_edges),
            fmt_f64(s.var_edges),
            fmt_f64(s.mean_isolated),
            fmt_f64(s.tv_distance),
            fmt_f64(s.tv_mc_error),
            fmt_f64(row.bound_paper),
            fmt_f64(row.bound_corrected),
            fmt_f64(s.frac_no_isolated),
            fmt_f64(s.frac_all_isolated),
            fmt_f64(s.frac_no_edges),
            fmt_f64(s.frac_at_least_half_n_edges),
            verdicts.join(";"),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = SweepConfig {
        n_list: a.n_list.clone(),
        alpha_grid: a.alpha_grid.clone(),
        c: a.c,
        r: a.trials,
        master_seed: a.seed,
        delta: a.delta,
    };
    let report = with_threads(a.threads, || regime_sweep(&cfg))??;
    if let Some(path) = &a.json {
        let json = artifact_json("sweep", Some(a.seed), a, &report);
        fs::write(path, json).map_err(io_err(path))?;
    }
    emit(a.out.as_deref(), &sweep_csv(&report), stdout)?;

    let failures = report
        .rows
        .iter()
        .flat_map(|r| r.verdicts.values())
        .filter(|&&v| v == crate::monte_carlo::Verdict::Fail)
        .count();
    if a.check && failures > 0 {
        return Err(CliError::VerdictFailed(failures));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct CoverageResult {
    method: &'static str,
    params: ModelParams,
    grid_points: usize,
    trials: u64,
    coverage_probability: f64,
    /// `Np / ln N`; `null` for n < 2.
    coverage_ratio: Option<f64>,
    threshold: f64,
    above_threshold: Option<bool>,
}

pub fn cmd_coverage(a: &CoverageArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let m = a.params.model()?;
    let prob = with_threads(a.threads, || {
        coverage_probability(&m, a.trials, a.grid_points, a.seed)
    })??;
    let ratio = model::coverage_ratio(m.n, m.p)?;
    let result = CoverageResult {
        method: "approximate (grid)",
        params: m,
        grid_points: a.grid_points,
        trials: a.trials,
        coverage_probability: prob,
        coverage_ratio: ratio,
        threshold: 0.5,
        above_threshold: ratio.map(|r| r > 0.5),
    };
    emit(
        a.out.as_deref(),
        &artifact_json("coverage", Some(a.seed), a, result),
        stdout,
    )
}
