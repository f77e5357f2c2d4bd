//! `dercost`: ownership-cost rates, uncertainty risk, and payment
//! verification for distributed energy resources.

#![forbid(unsafe_code)]

mod commands;
mod report;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Failures split by exit code: bad inputs (1) vs unreadable files (2).
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

impl From<dercost_core::CoreError> for CliError {
    fn from(err: dercost_core::CoreError) -> Self {
        CliError::Validation(err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "dercost",
    version,
    about = "Ownership-cost rates, risk, and payment verification for distributed energy resources"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cost rates for one scenario under every accounting approach
    Compute(ComputeArgs),
    /// Expected cost and risk over the uncertainty grids, with gated ranking
    Risk(RiskArgs),
    /// Accumulated payments per approach checked against the base case
    Verify(VerifyArgs),
    /// Per-effective-amp-hour battery rates from an operations log
    Battery(BatteryArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Scenario: file path, name under $DERCOST_SEED_DIR, or built-in name
    #[arg(default_value = scenario::BUILTIN_NAME)]
    scenario: String,
    /// Restrict output to one approach (I, II, III.A, III.B)
    #[arg(long)]
    approach: Option<String>,
    /// Escalation year index for the approach that uses one
    #[arg(long)]
    year: Option<u32>,
    /// Accept planning horizons that are not whole years
    #[arg(long)]
    fractional_years: bool,
    /// Directory for CSV reports
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct RiskArgs {
    /// Scenario: file path, name under $DERCOST_SEED_DIR, or built-in name
    #[arg(default_value = scenario::BUILTIN_NAME)]
    scenario: String,
    /// Relative total-payment error tolerance for the accuracy gate
    #[arg(long)]
    gate_tol: Option<f64>,
    /// Escalation year index for the approach that uses one
    #[arg(long)]
    year: Option<u32>,
    /// Gate on present-value totals instead of nominal sums
    #[arg(long)]
    pv: bool,
    /// Also write the full sensitivity surface per approach
    #[arg(long)]
    surface: bool,
    /// Directory for CSV reports
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Scenario: file path, name under $DERCOST_SEED_DIR, or built-in name
    #[arg(default_value = scenario::BUILTIN_NAME)]
    scenario: String,
    /// Comma-separated project horizons in years (default 4,8,12,16,20)
    #[arg(long)]
    horizons: Option<String>,
    /// Directory for CSV reports
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct BatteryArgs {
    /// Scenario: file path or name under $DERCOST_SEED_DIR (kind = "battery")
    scenario: String,
    /// Escalation year index for the replacement-aware rates
    #[arg(long)]
    year: Option<u32>,
    /// Directory for CSV reports
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute(args) => commands::compute(&args),
        Command::Risk(args) => commands::risk(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Battery(args) => commands::battery(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
