//! `anyon1d`: tables, spectra and property checks for two one-dimensional anyons.
//!
//! Exit codes: 0 success, 1 a property check failed, 2 invalid configuration,
//! 3 numerical failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser, Debug)]
#[command(version, about = "Two-body observables of one-dimensional anyons with a zero-range interaction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Free-space bound pair: off-diagonal density matrix, momentum distribution, summary.
    Boundstate(StateArgs),
    /// Pair in a harmonic trap: spectrum, momentum distribution and tail diagnostics.
    Ho(HoArgs),
    /// Run the property suite on the built-in corpus.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stats {
    Boson,
    Fermion,
    Ba,
    Fa,
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    #[arg(long, value_enum, default_value = "ba")]
    pub stats: Stats,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Scattering length: a number, `inf` or `0`.
    #[arg(long, allow_hyphen_values = true)]
    pub asc: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Largest |k| tabulated, in units of the inverse length scale.
    #[arg(long)]
    pub kmax: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct HoArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Spectral branch when the state is selected by `--asc`.
    #[arg(long)]
    pub branch: Option<i64>,
    #[arg(long, default_value_t = 64)]
    pub grid_coarse: usize,
    #[arg(long, default_value_t = 32)]
    pub grid_fine: usize,
    /// Half-width of the relative-coordinate window, in oscillator lengths.
    #[arg(long, default_value_t = 12.0)]
    pub window: f64,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// One of all, formal-shift, mirror, contacts, normalizations, exchange, boundary.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Negative control: flips the sign in the mirror relation.
    #[arg(long)]
    pub inject_sign_flip: bool,
    /// Directory for report.json; omitted means stdout only.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure classes mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Property,
    Config(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Property => 1,
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl From<anyon1d_core::Error> for Failure {
    fn from(e: anyon1d_core::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(format!("i/o: {e}"))
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("ANYON1D_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Config(format!("ANYON1D_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Boundstate(args) => commands::boundstate(&args),
        Command::Ho(args) => commands::ho(&args),
        Command::Verify(args) => commands::verify(&args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Property => eprintln!("error: property check failed"),
                Failure::Config(m) => eprintln!("error: invalid configuration: {m}"),
                Failure::Numeric(m) => eprintln!("error: numerical failure: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
