//! Command-line front end over `csgauge-core`: threshold queries, the
//! phase-diagram sweep, soliton export, ball minimization, and the
//! verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parameter domain error,
//! 3 I/O error, 4 requested root unavailable, 5 descent divergence.

pub mod commands;
pub mod fmtnum;
pub mod manifest;
pub mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use csgauge_core::CsError;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CsError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub fn exit_code(err: &CliError) -> i32 {
    match err {
        CliError::Core(CsError::RootUnavailable { .. }) => 4,
        CliError::Core(CsError::Diverged { .. }) => 5,
        CliError::Core(_) => 2,
        CliError::Io(_) => 3,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichRoot {
    K1,
    K2,
    K0,
}

#[derive(Debug, Parser)]
#[command(
    name = "csgauge",
    version,
    about = "Thresholds, solitons, and ball minimization for the radial gauged Schrodinger energy"
)]
pub struct Cli {
    /// Emit machine-readable JSON where the command supports it.
    #[arg(long, global = true)]
    pub json: bool,
    /// Primary output path; artifacts and a run manifest are written here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for the randomized verification suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print m, omega0, omega1, omega_bar at one exponent.
    Threshold {
        #[arg(long)]
        p: f64,
    },
    /// Tabulate the thresholds over an exponent band into a CSV file.
    Sweep {
        #[arg(long, default_value_t = 1.1)]
        pmin: f64,
        #[arg(long, default_value_t = 2.9)]
        pmax: f64,
        #[arg(long, default_value_t = 180)]
        steps: usize,
    },
    /// Export r, w, w' for one root of the scalar equation as CSV.
    Soliton {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long, value_enum)]
        which: WhichRoot,
        /// Half-width of the export grid (default 40/sqrt(k)).
        #[arg(long)]
        half_width: Option<f64>,
        /// Grid intervals (default: spacing 0.02).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Gradient descent on the ball; writes a profile CSV and a JSON summary.
    Minimize {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        n: usize,
        /// zero_plus_bump or translated_soliton:<rho>
        #[arg(long, default_value = "zero_plus_bump")]
        init: String,
        #[arg(long, default_value_t = 50_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-6)]
        grad_tol: f64,
        /// Descent step (default: stability cap for the grid).
        #[arg(long)]
        step_init: Option<f64>,
    },
    /// Run the named invariant checks; exit 0 only if all pass.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Level::Fast)]
        level: verify::Level,
        /// Shorthand for --level fast.
        #[arg(long, conflicts_with_all = ["level", "full"])]
        fast: bool,
        /// Shorthand for --level full.
        #[arg(long, conflicts_with = "level")]
        full: bool,
    },
}

fn require_out(out: Option<&PathBuf>, command: &str) -> Result<PathBuf, CliError> {
    out.cloned().ok_or_else(|| {
        CliError::Core(CsError::BadConfig { reason: format!("{command} requires --out <path>") })
    })
}

pub fn run(cli: Cli) -> i32 {
    let result: Result<i32, CliError> = match cli.command {
        Command::Threshold { p } => {
            commands::cmd_threshold(p, cli.json, cli.out.as_deref()).map(|()| 0)
        }
        Command::Sweep { pmin, pmax, steps } => require_out(cli.out.as_ref(), "sweep")
            .and_then(|out| commands::cmd_sweep(pmin, pmax, steps, &out))
            .map(|()| 0),
        Command::Soliton { p, omega, which, half_width, n } => {
            require_out(cli.out.as_ref(), "soliton")
                .and_then(|out| commands::cmd_soliton(p, omega, which, half_width, n, &out))
                .map(|()| 0)
        }
        Command::Minimize { p, omega, radius, n, init, max_iters, grad_tol, step_init } => {
            require_out(cli.out.as_ref(), "minimize")
                .and_then(|out| {
                    commands::cmd_minimize(
                        p, omega, radius, n, &init, max_iters, grad_tol, step_init, &out,
                    )
                })
                .map(|()| 0)
        }
        Command::Verify { level, fast, full } => {
            let level = if full {
                verify::Level::Full
            } else if fast {
                verify::Level::Fast
            } else {
                level
            };
            let seed = cli.seed.unwrap_or(7);
            let checks = verify::run_suite(level, seed);
            let mut failed = Vec::new();
            for c in &checks {
                println!("[{}] {} — {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                if !c.passed {
                    failed.push(c.name);
                }
            }
            if failed.is_empty() {
                println!("verify: all {} checks passed", checks.len());
                Ok(0)
            } else {
                println!("verify: FAILED: {}", failed.join(", "));
                Ok(1)
            }
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main_entry() -> i32 {
    run(Cli::parse())
}
