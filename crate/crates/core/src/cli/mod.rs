//! Command-line driver. Every run writes its full configuration next to the
//! result: a `config` object in JSON output, `#`-prefixed metadata in CSV.
//!
//! Exit codes: 0 success, 2 input error, 3 domain error (singular chart or
//! Fisher matrix, degenerate state), 4 optimizer did not converge.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;

pub use output::{schema, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;

#[derive(Debug, Parser, Serialize)]
#[command(name = "frame-qfi", version, about = "Quantum Fisher information for SU(2) frame alignment")]
pub struct Cli {
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,

    /// Output format; tables default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,

    /// Read angle arguments in degrees.
    #[arg(long, global = true)]
    pub degrees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Fisher matrix, its trace and inverse trace at one rotation.
    Qfi(QfiArgs),
    /// Tr F^-1 of the GHZ probe over a grid of beta, optionally with the
    /// anti-coherent baseline.
    SweepBeta(SweepArgs),
    /// Haar-averaged trace of the Fisher matrix.
    Haar(HaarArgs),
    /// Closed-form against numeric trace QFI under dephasing or depolarizing noise.
    Noise(NoiseArgs),
    /// Simulate the variance-plus-parity estimation protocol.
    Estimate(EstimateArgs),
    /// Maximize the Haar-averaged trace over pure states.
    Optimize(OptimizeArgs),
    /// Majorana points of a state.
    Majorana(MajoranaArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProbeArgs {
    /// Number of qubits (spin j = N/2) for the GHZ probe.
    #[arg(long = "N")]
    pub n: Option<u32>,
    /// `ghz`, or a JSON file {"j": .., "amplitudes": [[re, im], ...]}.
    #[arg(long, default_value = "ghz")]
    pub state: String,
    /// Relative phase of the GHZ probe.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct AngleArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct QfiArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub probe: ProbeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub angles: AngleArgs,
    /// Fail with exit code 3 when the inverse does not exist.
    #[arg(long)]
    pub inverse: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long = "N")]
    pub n: u32,
    /// Grid points; beta_i = (i + 1/2) pi / steps.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Add the anti-coherent baseline 3/(N(N+1)) (1 + 2/sin^2 beta).
    #[arg(long)]
    pub compare_goldberg: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct HaarArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub probe: ProbeArgs,
    /// Closed-form average (the default).
    #[arg(long, conflicts_with = "mc")]
    pub analytic: bool,
    /// Monte Carlo with this many Haar samples.
    #[arg(long)]
    pub mc: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Dephasing,
    Depolarizing,
}

#[derive(Debug, Args, Serialize)]
pub struct NoiseArgs {
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Comma-separated noise parameters in [0, 1].
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.25, 0.5, 0.75, 1.0])]
    pub p: Vec<f64>,
    /// Comma-separated beta values; defaults to k pi / 6, k = 1..5.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub beta: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Skip the numeric mixed-state column.
    #[arg(long)]
    pub no_numeric: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[arg(long = "N")]
    pub n: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub angles: AngleArgs,
    /// Copies per spin-component setting.
    #[arg(long, default_value_t = 10_000)]
    pub shots: usize,
    /// Copies for the parity stage; defaults to 3 * shots.
    #[arg(long)]
    pub parity_shots: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub batches: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Re-align with the true angles instead of the stage-1 estimates.
    #[arg(long)]
    pub ideal_realign: bool,
    /// Omit per-run records.
    #[arg(long)]
    pub summary_only: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct OptimizeArgs {
    /// Spin quantum number (half-integer).
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    pub j: Option<f64>,
    /// Number of qubits, j = N/2.
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 5000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct MajoranaArgs {
    /// GHZ probe on this many qubits.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    pub ghz: Option<u32>,
    /// JSON state file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    /// Rotate the state by alpha,beta,gamma first.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub rotate: Option<Vec<f64>>,
}

/// A failed run: message for standard error and the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SingularRotation { .. }
        | Error::SingularFisher { .. }
        | Error::DegenerateState { .. }
        | Error::DegenerateInversion { .. }
        | Error::InconsistentMoments { .. } => EXIT_DOMAIN,
        _ => EXIT_INPUT,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(format!("i/o: {e}"))
    }
}

/// Runs a parsed command; `Ok` carries the exit code (0, or 4 when the
/// optimizer did not converge).
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    commands::dispatch(cli)
}

/// Parses `args` (including the program name), runs, reports errors on
/// standard error and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
