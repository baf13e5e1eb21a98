//! `wiretap`: batch front-end for region computation, Gaussian scans and
//! the binning simulator.
//!
//! Exit codes: 0 success, 1 validation-suite failure, 2 usage or input
//! error. `WIRETAP_THREADS` sets the worker-thread count (default: all
//! cores).

mod commands;
mod error;
mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::discrete::DiscreteRegionArgs;
use commands::gaussian::{GaussianRegionArgs, GaussianScanArgs};
use commands::simulate::SimulateArgs;
use commands::validate::ValidateArgs;
use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(
    name = "wiretap",
    version,
    about = "Rate-equivocation regions for wiretap channels with correlated states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. `--seed` lives with each
/// subcommand's settings so that it can also come from a config file.
#[derive(clap::Args, Debug)]
struct Common {
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// JSON config file (or a previous run's manifest.json); flags override
    /// its keys.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search auxiliary policies of a discrete model; write the region and
    /// secrecy-rate bounds.
    DiscreteRegion {
        #[command(flatten)]
        args: DiscreteRegionArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep alpha for Gaussian parameters; write the MI/leakage table.
    GaussianScan {
        #[command(flatten)]
        args: GaussianScanArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Thresholds and boundary of a Gaussian special case.
    GaussianRegion {
        #[command(flatten)]
        args: GaussianRegionArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Monte-Carlo run of the random-binning scheme.
    Simulate {
        #[command(flatten)]
        args: SimulateArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in oracle cross-check suites.
    Validate {
        #[command(flatten)]
        args: ValidateArgs,
        #[command(flatten)]
        common: Common,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("WIRETAP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::usage(format!(
            "WIRETAP_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn dispatch(cli: Cli) -> CliResult<bool> {
    configure_threads()?;
    match cli.command {
        Command::DiscreteRegion { args, common } => {
            commands::discrete::run(&args, common.config.as_deref(), &common.out).map(|_| true)
        }
        Command::GaussianScan { args, common } => {
            commands::gaussian::run_scan(&args, common.config.as_deref(), &common.out).map(|_| true)
        }
        Command::GaussianRegion { args, common } => {
            commands::gaussian::run_region(&args, common.config.as_deref(), &common.out)
                .map(|_| true)
        }
        Command::Simulate { args, common } => {
            commands::simulate::run(&args, common.config.as_deref(), &common.out).map(|_| true)
        }
        Command::Validate { args, common } => {
            commands::validate::run(&args, common.config.as_deref(), &common.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed; see validate.json");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
