#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

mod commands;
mod lists;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::lists::{parse_count, parse_list, NumberList};

#[derive(Debug, Parser)]
#[command(name = "fracstable", version, about = "Reflected stable processes and fractional Cauchy problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transition densities of the reflected process from the forward solver.
    Forward(ForwardArgs),
    /// Terminal values or sample paths of Y, Z, S, D or E.
    Simulate(SimulateArgs),
    /// Run the acceptance checks and write a JSON report.
    Validate(ValidateArgs),
    /// Solve a time-fractional Cauchy problem.
    Cauchy(CauchyArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Manifest path; defaults to `<out>.manifest.json`.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Print the manifest and exit without computing.
    #[arg(long)]
    dry_run: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
enum Integrator {
    Sdirk3,
    Dopri5,
}

#[derive(Debug, Args)]
struct ForwardArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 12.0)]
    ymax: f64,
    #[arg(long, default_value_t = 1200)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    x0: f64,
    /// `0.5,1,2` or `a:step:b`.
    #[arg(long, default_value = "0.5,1,2", value_parser = parse_list)]
    times: NumberList,
    #[arg(long, value_enum, default_value_t = Integrator::Sdirk3)]
    method: Integrator,
    #[arg(long, default_value_t = 1e-8)]
    rtol: f64,
    #[arg(long, default_value_t = 1e-10)]
    atol: f64,
    #[arg(long, default_value = "forward.csv")]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
enum Process {
    Y,
    Z,
    S,
    D,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
enum InverseMethodArg {
    Hitting,
    Supremum,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_enum, ignore_case = true)]
    process: Process,
    #[arg(long, conflicts_with = "beta", required_unless_present = "beta")]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value = "10000", value_parser = parse_count)]
    paths: usize,
    /// Grid steps for path-based draws.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How E is drawn; only valid with `--process E`.
    #[arg(long, value_enum)]
    method: Option<InverseMethodArg>,
    #[arg(long, default_value_t = 1e-6)]
    rel_tol: f64,
    /// Write whole grid paths instead of terminal values.
    #[arg(long)]
    full_paths: bool,
    #[arg(long, default_value = "simulate.csv")]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Check keys or numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Overrides every Monte Carlo sample count; accepts `1e5`.
    #[arg(long, value_parser = parse_count)]
    mc_samples: Option<usize>,
    #[arg(long, default_value = "validation.json")]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
enum Problem {
    Decay,
    Heat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
enum SolveMethod {
    Quad,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
enum TimeChangeArg {
    Z,
    E,
}

#[derive(Debug, Args)]
struct CauchyArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, value_enum, default_value_t = SolveMethod::Quad)]
    method: SolveMethod,
    /// Decay rate for `--problem decay`.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, value_enum, ignore_case = true, default_value_t = TimeChangeArg::E)]
    time_change: TimeChangeArg,
    /// Grid steps of the reflected path for `--time-change Z`.
    #[arg(long, default_value_t = 4096)]
    steps: usize,
    #[arg(long, default_value = "100000", value_parser = parse_count)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Profile grid for `--problem heat`, `a:step:b` or a comma list.
    #[arg(long, default_value = "-5:0.05:5", value_parser = parse_list, allow_hyphen_values = true)]
    xgrid: NumberList,
    #[arg(long, default_value = "cauchy.csv")]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Core(#[from] fracstable::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_domain() => 2,
            _ => 1,
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FRACSTABLE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("FRACSTABLE_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failed(format!("could not build thread pool: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let res = init_threads().and_then(|_| match cli.command {
        Command::Forward(a) => commands::forward(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Validate(a) => commands::validate(a),
        Command::Cauchy(a) => commands::cauchy(a),
    });
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
