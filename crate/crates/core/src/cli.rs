//! Command-line front end: `classify`, `eval`, `solve`, `shoot`, `verify`.
//!
//! Exit status is 0 on success, 1 on a domain error (reported as a JSON
//! object on standard error) and 2 on a usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{
    classify_regime, exponents, integrability_interval, validate, Exponents, IntegrabilityInterval,
    Parameters, RegimeReport,
};
use crate::potential::{riesz_eval, wolff_eval, PotentialConfig, WolffOrder};
use crate::quasilinear::{find_fast_ground_state, ShootConfig};
use crate::radial::{read_file, write_file, RadialFunction};
use crate::solver::{iterate_system, SolveConfig, SolveResult};
use crate::verify::{run_suite, Status, Suite, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "wolffkit", version, about = "Wolff-potential systems: classification, evaluation, solvers and checks")]
struct Cli {
    /// Log level (error, warn, info, debug, trace); RUST_LOG overrides.
    #[arg(long, global = true, default_value = "warn")]
    log_level: String,
    /// Omit the timestamp from JSON reports, making them byte-reproducible.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exponents, subcriticality and decay regime of a parameter tuple.
    Classify(ClassifyArgs),
    /// Wolff or Riesz potential of a radial profile.
    Eval(EvalArgs),
    /// Fixed-point iteration of the integral system.
    Solve(SolveArgs),
    /// Shooting for the threshold solution of the radial γ-Laplace system.
    Shoot(ShootArgs),
    /// Run the verification checks and write a report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct TupleArgs {
    #[arg(long, required_unless_present = "params")]
    n: Option<u32>,
    #[arg(long, required_unless_present = "params")]
    beta: Option<f64>,
    #[arg(long, required_unless_present = "params")]
    gamma: Option<f64>,
    #[arg(long, required_unless_present = "params")]
    p: Option<f64>,
    #[arg(long, required_unless_present = "params")]
    q: Option<f64>,
    #[arg(long, required_unless_present = "params", allow_hyphen_values = true)]
    sigma1: Option<f64>,
    #[arg(long, required_unless_present = "params", allow_hyphen_values = true)]
    sigma2: Option<f64>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Parameter file; replaces the individual flags.
    #[arg(long, conflicts_with_all = ["n", "beta", "gamma", "p", "q", "sigma1", "sigma2"])]
    params: Option<PathBuf>,
    #[command(flatten)]
    tuple: TupleArgs,
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Operator {
    Wolff,
    Riesz,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Which potential to evaluate.
    #[arg(long, value_enum)]
    op: Operator,
    /// Parameter file (JSON).
    #[arg(long)]
    params: PathBuf,
    /// Source profile (CSV with a JSON sidecar).
    #[arg(long)]
    source: PathBuf,
    /// Potential configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Riesz order; defaults to beta*gamma.
    #[arg(long)]
    alpha: Option<f64>,
    /// Output profile (CSV, with a JSON sidecar next to it).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Parameter file (JSON).
    #[arg(long)]
    params: PathBuf,
    /// Solver configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Result directory (u.csv, v.csv, report.json).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ShootArgs {
    /// Parameter file (JSON).
    #[arg(long)]
    params: PathBuf,
    /// Shooting configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Central value u(0).
    #[arg(long)]
    a: Option<f64>,
    /// Initial bracket for v(0), as `lo,hi`.
    #[arg(long, value_parser = parse_bracket)]
    bracket: Option<(f64, f64)>,
    /// Radius at which to stop the reported profile.
    #[arg(long)]
    r_stop: Option<f64>,
    /// Result directory (u.csv, v.csv, report.json).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Rates,
    Integrability,
    Inequalities,
    Loglimit,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Rates => Suite::Rates,
            SuiteArg::Integrability => Suite::Integrability,
            SuiteArg::Inequalities => Suite::Inequalities,
            SuiteArg::Loglimit => Suite::Loglimit,
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Parameter file (JSON).
    #[arg(long)]
    params: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    /// Seed of the inequality battery.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Verification configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report file (JSON).
    #[arg(long)]
    out: PathBuf,
}

fn parse_bracket(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected `lo,hi`, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower end: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper end: {e}"))?;
    Ok((lo, hi))
}

/// Parses `argv` (program name first) and runs the command; returns the
/// process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_logging(&cli.log_level);
    init_threads();
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            1
        }
    }
}

/// `{"error": kind, "message": text}` for standard error.
pub fn error_json(e: &Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

fn init_logging(level: &str) {
    let env = env_logger::Env::default().default_filter_or(level);
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Caps the worker pool at `WOLFFKIT_THREADS` when set.
fn init_threads() {
    if let Some(n) = std::env::var("WOLFFKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    let stamp = (!cli.no_timestamp).then(timestamp);
    match &cli.command {
        Command::Classify(args) => classify(args),
        Command::Eval(args) => eval(args),
        Command::Solve(args) => solve(args, stamp),
        Command::Shoot(args) => shoot(args, stamp),
        Command::Verify(args) => verify(args, stamp),
    }
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn read_config<T: DeserializeOwned + Default>(path: Option<&PathBuf>) -> Result<T> {
    match path {
        Some(p) => read_json(p),
        None => Ok(T::default()),
    }
}

/// Reads and validates a parameter file.
pub fn load_params(path: &Path) -> Result<Parameters> {
    validate(read_json(path)?)
}

/// Reads a profile written by [`RadialFunction::save`].
pub fn load_profile(path: &Path) -> Result<RadialFunction> {
    RadialFunction::load(path)
}

#[derive(Debug, Serialize)]
struct ClassifyOutput {
    params: Parameters,
    #[serde(flatten)]
    report: RegimeReport,
    exponents: Exponents,
    #[serde(skip_serializing_if = "Option::is_none")]
    integrability: Option<IntegrabilityInterval>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

fn classify(args: &ClassifyArgs) -> Result<()> {
    let params = match &args.params {
        Some(path) => load_params(path)?,
        None => {
            // clap guarantees every flag is present without --params
            let t = &args.tuple;
            let get = |v: Option<f64>| v.ok_or_else(|| Error::InvalidArgument("incomplete parameter flags".into()));
            Parameters::new(
                t.n.ok_or_else(|| Error::InvalidArgument("missing --n".into()))?,
                get(t.beta)?,
                get(t.gamma)?,
                get(t.p)?,
                get(t.q)?,
                get(t.sigma1)?,
                get(t.sigma2)?,
            )?
        }
    };
    let report = classify_regime(&params);
    let warnings = report.warnings.clone();
    let out = ClassifyOutput {
        params,
        report,
        exponents: exponents(&params),
        integrability: integrability_interval(&params).ok(),
        warnings,
    };
    let json = to_json(&out)?;
    match &args.out {
        Some(path) => write_file(path, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn eval(args: &EvalArgs) -> Result<()> {
    let params = load_params(&args.params)?;
    let cfg: PotentialConfig = read_config(args.config.as_ref())?;
    let source = load_profile(&args.source)?;
    let grid = source.grid().clone();
    let out = match args.op {
        Operator::Wolff => wolff_eval(WolffOrder::from(&params), &source, &cfg, &grid)?,
        Operator::Riesz => {
            let alpha = args.alpha.unwrap_or(params.order());
            riesz_eval(params.n, alpha, &source, &cfg, &grid)?
        }
    };
    out.save(&args.out)
}

fn write_result(dir: &Path, params: &Parameters, result: &SolveResult, stamp: Option<String>) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    result.u.save(&dir.join("u.csv"))?;
    result.v.save(&dir.join("v.csv"))?;
    let mut report = result.report(params);
    report.timestamp = stamp;
    write_file(&dir.join("report.json"), &to_json(&report)?)
}

/// Outputs are written either way; a non-converged run then exits with an error.
fn finish(result: &SolveResult, tol: f64) -> Result<()> {
    if result.converged {
        Ok(())
    } else {
        Err(Error::NotConverged {
            iterations: result.iterations,
            last_change: result.residual_u.max(result.residual_v).max(tol),
            trace: result.trace.clone(),
        })
    }
}

fn solve(args: &SolveArgs, stamp: Option<String>) -> Result<()> {
    let params = load_params(&args.params)?;
    let cfg: SolveConfig = read_config(args.config.as_ref())?;
    let result = iterate_system(&params, &cfg)?;
    write_result(&args.out, &params, &result, stamp)?;
    finish(&result, cfg.rel_tol)
}

fn shoot(args: &ShootArgs, stamp: Option<String>) -> Result<()> {
    let params = load_params(&args.params)?;
    let mut cfg: ShootConfig = read_config(args.config.as_ref())?;
    if let Some(a) = args.a {
        cfg.a = a;
    }
    if let Some(b) = args.bracket {
        cfg.bracket = b;
    }
    if let Some(r) = args.r_stop {
        cfg.r_stop = r;
    }
    let ground = find_fast_ground_state(&params, &cfg)?;
    log::info!("threshold v(0) = {} in bracket {:?}", ground.b, ground.bracket);
    write_result(&args.out, &params, &ground.result, stamp)?;
    finish(&ground.result, cfg.agreement_tol)
}

fn verify(args: &VerifyArgs, stamp: Option<String>) -> Result<()> {
    let params = load_params(&args.params)?;
    let cfg: VerifyConfig = read_config(args.config.as_ref())?;
    let mut report = run_suite(&params, args.suite.into(), args.seed, &cfg)?;
    report.timestamp = stamp;
    write_file(&args.out, &to_json(&report)?)?;
    eprintln!(
        "{} passed, {} failed, {} skipped",
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Skipped)
    );
    Ok(())
}
