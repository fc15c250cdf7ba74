//! `oscsim`: reproduce the simulator's figure data, comparisons, entropy
//! series, and ion experiment plans as CSV/JSON, plus a self-check battery.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
//! 3 self-check failure.

// `!(x >= 0.0)` rejects NaN along with negatives.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod checks;
mod commands;
mod config;
mod output;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Numerical(String),
    SelfcheckFailed(usize),
}

impl From<oscsim_core::Error> for AppError {
    fn from(e: oscsim_core::Error) -> Self {
        AppError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Numerical(format!("i/o: {e}"))
    }
}

#[derive(Parser)]
#[command(
    name = "oscsim",
    version,
    about = "Pulsed-drive oscillator simulator: spectral-averaged heating, exact benchmark, ion planning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. Precedence: flag > config file > built-in
/// default (the r = 0.1, g = 0.045, k_B T/omega0 = 80 reference set).
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Cutoff ratio omega_c / omega0.
    #[arg(long)]
    r: Option<f64>,
    /// Dimensionless coupling g.
    #[arg(long)]
    g: Option<f64>,
    /// k_B T / (hbar omega0).
    #[arg(long)]
    temperature: Option<f64>,
    /// Last omega0 t of the time grid.
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of time samples.
    #[arg(long)]
    points: Option<usize>,
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Output directory (default: $OSCSIM_OUT_DIR or the working directory).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Heating of a single pulsed drive for one or more frequency ratios.
    SingleDrive(commands::SingleDriveArgs),
    /// Simulator vs exact benchmark over a frequency band, with summary.
    Compare(commands::CompareArgs),
    /// Entropy, mean occupation, and purity of the simulated state.
    Entropy(commands::EntropyArgs),
    /// Build a trapped-ion drive plan and its discrete-vs-continuum report.
    PlanIon(commands::PlanIonArgs),
    /// Run the full invariant battery and emit a machine-readable report.
    Selfcheck(commands::SelfcheckArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::SingleDrive(args) => commands::single_drive(args),
        Command::Compare(args) => commands::compare(args),
        Command::Entropy(args) => commands::entropy(args),
        Command::PlanIon(args) => commands::plan_ion(args),
        Command::Selfcheck(args) => commands::selfcheck(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::SelfcheckFailed(n)) => {
            eprintln!("selfcheck: {n} check(s) failed");
            ExitCode::from(3)
        }
    }
}
