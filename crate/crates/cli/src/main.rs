//! `gibbs-lab`: experiments, figure data and bound checks for the
//! coordinate Gibbs sampler.
//!
//! Exit status: 0 on success, 2 for an invalid invocation or configuration,
//! 1 when a run fails (or, for `verify-bounds`, when a bound fails).

mod commands;
mod output;
mod source;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const THREADS_ENV: &str = "GIBBS_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "gibbs-lab",
    version,
    about = "Coordinate Gibbs sampler for the almost-exchangeable prior"
)]
struct Cli {
    /// Worker threads for replica fan-out (GIBBS_LAB_THREADS takes precedence).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Laplacian spectrum, λ, γ and β of a network.
    Spectral(SpectralArgs),
    /// Moments, CDF and quantiles of one truncated normal.
    Truncnorm(TruncnormArgs),
    /// Run Gibbs chains and write their trajectories.
    Sample(SampleArgs),
    /// Sandwich coupling from 0 and 1: sup-norm gap trajectories.
    MixEstimate(MixArgs),
    /// E(p̄(k) − ½)² from the centre, for one or more A.
    FigVariance(FigVarianceArgs),
    /// Mean hitting time of T_δ or T′_δ over a range of A.
    FigHitting(FigHittingArgs),
    /// Exact stationary draws by rejection (small d and A only).
    StationaryOracle(OracleArgs),
    /// Check every explicit bound at one configuration.
    VerifyBounds(VerifyArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NetworkArg {
    /// JSON or edge-list file, or builtin:KIND:D[:EPS] with KIND one of
    /// complete, path, cycle, two-blocks.
    #[arg(long)]
    pub network: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectralArgs {
    #[command(flatten)]
    pub network: NetworkArg,
    /// Also write the report to this JSON file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TruncnormArgs {
    /// Standard deviation σ; `inf` for the uniform law.
    #[arg(long)]
    pub sigma: f64,
    #[arg(long)]
    pub p: f64,
    /// Quantile levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub u: Vec<f64>,
    /// CDF arguments, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub network: NetworkArg,
    #[arg(long = "A")]
    pub a: f64,
    #[arg(long)]
    pub k: u64,
    #[arg(long, default_value_t = 1)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// zero, half, one, or a file with d coordinates.
    #[arg(long, default_value = "half")]
    pub start: String,
    /// Write every coordinate every this many steps instead of the
    /// barycenter/energy summary.
    #[arg(long)]
    pub dump_every: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct MixArgs {
    #[command(flatten)]
    pub network: NetworkArg,
    #[arg(long = "A")]
    pub a: f64,
    #[arg(long)]
    pub k: u64,
    #[arg(long, default_value_t = 100)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Threshold for T′_δ and δ-coalescence.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Start of the middle walker: zero, half, one or a file.
    #[arg(long, default_value = "half")]
    pub start: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct FigVarianceArgs {
    #[command(flatten)]
    pub network: NetworkArg,
    /// One or more values of A, comma separated.
    #[arg(long = "A", value_delimiter = ',', required = true)]
    pub a: Vec<f64>,
    /// Steps per run; defaults to 22·d·A².
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write this many individual sample paths.
    #[arg(long, default_value_t = 0)]
    pub paths: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum Which {
    #[value(name = "T")]
    T,
    #[value(name = "Tprime")]
    Tprime,
}

#[derive(Debug, Args, Serialize)]
pub struct FigHittingArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[command(flatten)]
    pub network: NetworkArg,
    /// Values of A, comma separated; defaults to a geometric grid of ten
    /// values from 10 to 200.
    #[arg(long = "A", value_delimiter = ',')]
    pub a: Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Censoring horizon; defaults to 100·d·A² per value of A.
    #[arg(long)]
    pub k_max: Option<u64>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    pub network: NetworkArg,
    #[arg(long = "A")]
    pub a: f64,
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value = "builtin:complete:4")]
    pub network: String,
    #[arg(long = "A", default_value_t = 150.0)]
    pub a: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 200)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the check results to this JSON file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure classes, mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::Runtime(e)
    }
}

impl From<gibbs_lab::Error> for Failure {
    fn from(e: gibbs_lab::Error) -> Self {
        Self::Runtime(e.into())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Runtime(e.into())
    }
}

pub fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => match flag {
            Some(0) => Err(usage("--threads must be positive")),
            other => Ok(other),
        },
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = thread_count(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Runtime(e.into()))?;
    }
    match cli.command {
        Command::Spectral(a) => commands::spectral(a),
        Command::Truncnorm(a) => commands::truncnorm(a),
        Command::Sample(a) => commands::sample(a),
        Command::MixEstimate(a) => commands::mix_estimate(a),
        Command::FigVariance(a) => commands::fig_variance(a),
        Command::FigHitting(a) => commands::fig_hitting(a),
        Command::StationaryOracle(a) => commands::stationary_oracle(a),
        Command::VerifyBounds(a) => verify::verify_bounds(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too, with exit code 0
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
