//! `curclust`: synthetic data generation, single-dataset clustering and
//! benchmark sweeps for robust CUR subspace clustering.

mod benchmark;
mod cluster;
mod synth;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curclust::{Kappa, SamplingMethod};

#[derive(Parser)]
#[command(name = "curclust", version, about = "Robust subspace clustering via CUR decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled union-of-subspaces dataset.
    Synth(SynthArgs),
    /// Cluster one data matrix.
    Cluster(ClusterArgs),
    /// Sweep sampling methods and kappa values over a dataset manifest.
    Benchmark(BenchmarkArgs),
}

#[derive(Args)]
pub struct SynthArgs {
    /// Ambient dimension (rows of the output matrix).
    #[arg(long)]
    pub ambient: usize,
    /// Subspace dimensions, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub dims: Vec<usize>,
    /// Points per subspace, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub points: Vec<usize>,
    /// Standard deviation of additive Gaussian noise.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Writes `<prefix>.csv` and `<prefix>.labels`.
    #[arg(long)]
    pub out_prefix: PathBuf,
}

/// Algorithm parameters shared by `cluster` and `benchmark`.
#[derive(Args, Clone)]
pub struct RcurArgs {
    /// Trials per rank guess.
    #[arg(long, default_value_t = 30)]
    pub trials: usize,
    /// Soft-threshold exponent.
    #[arg(long, default_value_t = 2.0)]
    pub tau: f64,
    /// Matrix power applied to the similarity matrix.
    #[arg(long, default_value_t = 1)]
    pub power: u32,
    /// Sample rows and columns with replacement (duplicates dropped).
    #[arg(long)]
    pub replacement: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct ClusterArgs {
    /// Data matrix CSV; columns are points.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Ground-truth labels; enables the error report.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Number of clusters L.
    #[arg(long)]
    pub clusters: usize,
    #[arg(long)]
    pub rmin: usize,
    #[arg(long)]
    pub rmax: usize,
    /// Column sampling method (also rows unless --row-sampling is given).
    #[arg(long, default_value = "uniform", value_parser = parse_method)]
    pub sampling: SamplingMethod,
    #[arg(long, value_parser = parse_method)]
    pub row_sampling: Option<SamplingMethod>,
    /// Column oversampling factor, or "inf" for all columns.
    #[arg(long, default_value = "inf", value_parser = parse_kappa)]
    pub kappa: Kappa,
    #[command(flatten)]
    pub rcur: RcurArgs,
    /// Write predicted labels here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchmarkArgs {
    /// Tab-separated dataset manifest.
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "uniform,length,leverage,deim", value_parser = parse_method)]
    pub sampling: Vec<SamplingMethod>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,inf", value_parser = parse_kappa)]
    pub kappa: Vec<Kappa>,
    /// Independent runs per dataset.
    #[arg(long, default_value_t = 10)]
    pub trials_outer: usize,
    #[command(flatten)]
    pub rcur: RcurArgs,
    /// Report CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Datasets processed concurrently.
    #[arg(long, env = "CURCLUST_JOBS", default_value_t = 1)]
    pub jobs: usize,
}

fn parse_method(s: &str) -> Result<SamplingMethod, String> {
    s.parse().map_err(|e: curclust::Error| e.to_string())
}

fn parse_kappa(s: &str) -> Result<Kappa, String> {
    s.parse().map_err(|e: curclust::Error| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(args) => synth::run(&args),
        Command::Cluster(args) => cluster::run(&args),
        Command::Benchmark(args) => benchmark::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
