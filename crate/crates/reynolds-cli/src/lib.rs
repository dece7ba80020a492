//! Command-line front end for the thin-film pressure solvers.
//!
//! Three verbs cover the workflow:
//!
//! * `solve` runs one problem from a TOML description and writes a
//!   plot-ready pressure CSV plus a run summary,
//! * `bench` times the segment solver against projected SOR on a built-in
//!   well family at a list of grid sizes,
//! * `verify` cross-checks every solver against the exhaustive enumeration
//!   oracle on randomized small problems.
//!
//! Exit status: 0 for a converged run, 2 when a solver ran but did not
//! converge (or a verification check failed), 1 for input errors.

pub mod bench;
pub mod config;
pub mod output;
pub mod problem;
pub mod solve;
pub mod verify;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

/// Converged, all checks passed.
pub const EXIT_OK: i32 = 0;
/// Unreadable or schema-invalid input.
pub const EXIT_INPUT: i32 = 1;
/// The run completed but the solver did not converge or a check failed.
pub const EXIT_UNCONVERGED: i32 = 2;

#[derive(Parser)]
#[command(name = "reynolds", version, about = "Thin-film pressure solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and write pressure CSV plus a run summary.
    Solve {
        /// Path to a TOML problem description.
        config: PathBuf,
        /// Override the solver tolerance from the config.
        #[arg(long)]
        tol: Option<f64>,
        /// Override the relaxation factor from the config.
        #[arg(long)]
        omega: Option<f64>,
        /// Override the sweep cap from the config.
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Time the segment solver against projected SOR over a size sweep.
    Bench {
        /// Path to a TOML config with a [bench] section.
        config: PathBuf,
    },
    /// Run randomized oracle and property checks.
    Verify {
        /// Path to a TOML config; the [verify] section is optional.
        config: PathBuf,
    },
}

/// Parse arguments from the process environment and run one verb.
///
/// Returns the process exit status instead of calling `exit` itself so the
/// whole CLI stays testable in-process.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here; they are not input errors.
            let code = if err.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve { config, tol, omega, max_iter } => {
            solve::run(&config, &solve::Overrides { tol, omega, max_iter })
        }
        Command::Bench { config } => bench::run(&config),
        Command::Verify { config } => verify::run(&config),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            EXIT_INPUT
        }
    }
}
