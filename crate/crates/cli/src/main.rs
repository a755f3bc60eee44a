//! `hoi`: higher-order information measures from the command line.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult, EXIT_INPUT};

#[derive(Debug, Parser)]
#[command(
    name = "hoi",
    version,
    about = "Higher-order information measures for covariance and cross-spectral matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measures of a single covariance matrix (JSON matrix file).
    Info(InfoArgs),
    /// Per-frequency measures from a multichannel time-series CSV.
    Spectra(SpectraArgs),
    /// Simulate an AR model into a time-series CSV.
    Simulate(SimulateArgs),
    /// Run a built-in reference experiment end to end.
    Toy(ToyArgs),
    /// Check every measure against its independent oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Real,
    Complex,
}

/// `all` or a single 0-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    All,
    One(usize),
}

fn parse_selector(s: &str) -> Result<Selector, String> {
    if s == "all" {
        return Ok(Selector::All);
    }
    s.parse().map(Selector::One).map_err(|_| format!("expected 'all' or an index, got '{s}'"))
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    /// Matrix file, or `-` for stdin.
    pub matrix: PathBuf,
    /// Partition as inline JSON (`[[0,1],[2,3]]`) or a path to a JSON file.
    #[arg(long)]
    pub partition: Option<String>,
    /// Per-node localizers and contributions.
    #[arg(long, value_parser = parse_selector)]
    pub node: Option<Selector>,
    /// Per-group localizers and contributions (needs --partition).
    #[arg(long, value_parser = parse_selector)]
    pub group: Option<Selector>,
    /// Evaluate as this kind regardless of the file.
    #[arg(long, value_enum)]
    pub kind_override: Option<KindArg>,
    /// Add `eps * mean(diag) * I` before evaluation.
    #[arg(long)]
    pub ridge: Option<f64>,
    /// Report in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, Args)]
pub struct SpectraArgs {
    /// Time-series CSV (columns = channels, rows = samples), or `-` for stdin.
    pub timeseries: PathBuf,
    /// Sampling rate in Hz.
    #[arg(long)]
    pub fs: f64,
    /// Samples per epoch.
    #[arg(long)]
    pub epoch_len: usize,
    #[arg(long)]
    pub partition: Option<String>,
    /// Comma-separated measure names.
    #[arg(long, value_delimiter = ',', default_value = "tc,dtc,oinfo,tse")]
    pub measures: Vec<String>,
    /// Directory for SVG line plots.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[arg(long)]
    pub ridge: Option<f64>,
    #[arg(long)]
    pub bits: bool,
    /// Output CSV path (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Model config JSON path, or `toy1` / `toy2`.
    pub model: String,
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = hoi_core::spectral::DEFAULT_BURN_IN)]
    pub burn_in: usize,
    /// Output CSV path; metadata goes to the same path with a `.json`
    /// extension. Default: CSV on stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ToyArgs {
    /// Experiment number.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory (default `toy<N>`).
    #[arg(long)]
    pub outdir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 400)]
    pub corpus_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn init_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("HOI_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("HOI_THREADS must be a non-negative integer, got '{value}'")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    let result = init_threads().and_then(|()| match cli.command {
        Command::Info(args) => commands::info(&args),
        Command::Spectra(args) => commands::spectra(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Toy(args) => commands::toy(&args),
        Command::Verify(args) => commands::verify(&args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
