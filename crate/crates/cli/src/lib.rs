//! Command-line front end for `fastkde`: estimation from data files,
//! accuracy and speed benchmarks over the bundled densities, and kernel
//! efficiency tables. Every command writes versioned CSV.
//!
//! Exit codes: 0 on success, 2 for usage errors and unreadable files, 3 for
//! bad data.

pub mod commands;
pub mod error;
pub mod input;
pub mod method;
pub mod output;
pub mod threads;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub use commands::accuracy::{AccuracyArgs, ExperimentRecord, Summary};
pub use commands::densities::DensitiesArgs;
pub use commands::efficiency::{EfficiencyArgs, EfficiencyRow};
pub use commands::estimate::EstimateArgs;
pub use commands::speed::{QuerySet, SpeedArgs, Timing};
pub use error::{CliError, Result};
pub use method::{Engine, Method};

#[derive(Debug, Parser)]
#[command(name = "fastkde", version, about = "Exact linear-time kernel density estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a density (and optionally its derivative) from a data file.
    Estimate(EstimateArgs),
    /// Integrated squared error over replicated samples from a benchmark density.
    BenchAccuracy(AccuracyArgs),
    /// Wall time of each estimator across sample and grid sizes.
    BenchSpeed(SpeedArgs),
    /// Efficiency of K_α relative to the optimal kernel.
    EfficiencyTable(EfficiencyArgs),
    /// The benchmark density catalog.
    Densities(DensitiesArgs),
}

pub fn run<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match &cli.command {
        Command::Estimate(a) => commands::estimate::run(a),
        Command::BenchAccuracy(a) => commands::accuracy::run(a),
        Command::BenchSpeed(a) => commands::speed::run(a),
        Command::EfficiencyTable(a) => commands::efficiency::run(a),
        Command::Densities(a) => commands::densities::run(a),
    }
}

/// Runs and reports errors on stderr; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run(args) {
        Ok(()) => 0,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            e.exit_code()
        }
        Err(e) => {
            eprintln!("fastkde: {e}");
            e.exit_code()
        }
    }
}
