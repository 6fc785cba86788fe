//! jastrow-forge: build parent Hamiltonians for confined 1D systems with
//! Bijl-Jastrow ground states, then machine-check the exactness claims
//! four independent ways (constant local energy, cusp conditions, grid
//! diagonalization, zero-variance sampling).
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage or config
//! error. All randomness flows from config seeds (default 0), never from
//! the clock.

mod catalog;
mod config;
mod run;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use jastrow_core::Sabotage;

use run::Overrides;

#[derive(Parser)]
#[command(
    name = "jastrow-forge",
    version,
    about = "Parent Hamiltonians for Jastrow ground states, with machine-checked exactness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the cataloged models with their closed-form energies
    Catalog {
        /// Show one entry only (catalog name, family name, or alias)
        #[arg(long)]
        family: Option<String>,
    },
    /// Sweep random configurations and check E_loc equals its expected constant
    Verify(RunArgs),
    /// Diagonalize the two-particle Hamiltonian on a grid and compare
    Oracle(RunArgs),
    /// Metropolis-sample |Psi|^2; write histograms and energy statistics
    Sample(RunArgs),
    /// Run every check section of every config in a directory
    All(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML run config (for `all`: a directory of configs)
    #[arg(long)]
    config: PathBuf,
    /// Directory for CSV/JSON artifacts and the run manifest
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    /// Override the seed from the config
    #[arg(long)]
    seed: Option<u64>,
    /// Override the verify threshold from the config
    #[arg(long)]
    threshold: Option<f64>,
    /// Flip the sign of the three-body term (mutation testing)
    #[arg(long, hide = true)]
    sabotage_v3: bool,
    /// Flip the sign of the long-range term (mutation testing)
    #[arg(long, hide = true)]
    sabotage_v2l: bool,
}

impl RunArgs {
    fn sabotage(&self) -> Result<Sabotage> {
        match (self.sabotage_v3, self.sabotage_v2l) {
            (false, false) => Ok(Sabotage::None),
            (true, false) => Ok(Sabotage::FlipV3Sign),
            (false, true) => Ok(Sabotage::FlipV2LSign),
            (true, true) => bail!("choose at most one sabotage flag"),
        }
    }

    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            threshold: self.threshold,
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Catalog { family } => {
            catalog::print_catalog(family.as_deref())?;
            Ok(true)
        }
        Command::Verify(args) => {
            run::cmd_verify(&args.config, &args.out, args.overrides(), args.sabotage()?)
        }
        Command::Oracle(args) => run::cmd_oracle(&args.config, &args.out, args.sabotage()?),
        Command::Sample(args) => {
            run::cmd_sample(&args.config, &args.out, args.overrides(), args.sabotage()?)
        }
        Command::All(args) => {
            run::cmd_all(&args.config, &args.out, args.overrides(), args.sabotage()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // A panic must still come back as an orderly config-error exit, not an
    // abort; the checks themselves signal through Ok(false).
    match catch_unwind(AssertUnwindSafe(|| dispatch(cli))) {
        Ok(Ok(true)) => ExitCode::SUCCESS,
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(2)
        }
    }
}
