//! `pebblelab`: command-line front end.
//!
//! Exit status is 0 on success, 2 on a usage error (bad flags or out-of-range
//! parameters) and 1 when a run fails (for example, an enumeration cap).
//! Output is assembled in memory and written only on success, so a failed run
//! leaves no partial files.

mod commands;
mod manifest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(
    name = "pebblelab",
    version,
    about = "Pebbling on the rook's graph and random bipartite multigraphs"
)]
pub struct Cli {
    /// Cap on worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Where results go and in what shape.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Output {
    /// Write here instead of stdout; a manifest goes next to it as `<out>.manifest.json`
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a uniform configuration of t pebbles on the n-by-n grid, or a random bipartite graph
    Sample(commands::SampleArgs),
    /// Decide solvability of a configuration, for one root or all
    Solve(commands::SolveArgs),
    /// Convert between a configuration and its bipartite multigraph
    Transform(commands::TransformArgs),
    /// Exact distribution and moments of the support size
    Stats(commands::StatsArgs),
    /// Monte Carlo solvability estimates over a grid of t
    Sweep(commands::SweepArgs),
    /// Locate the t where the solvable fraction crosses 1/2
    #[command(name = "t-half")]
    THalf(commands::THalfArgs),
    /// Random-graph experiments
    Experiment(commands::ExperimentArgs),
    /// Run the built-in invariant checks
    Verify(commands::VerifyArgs),
}

/// Why a run stopped.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<pebblelab::Error> for CliError {
    fn from(e: pebblelab::Error) -> Self {
        use pebblelab::Error as E;
        match e {
            E::InvalidDomain(_) | E::UnknownStrategy { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("pool is configured once");
    }
    match commands::dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
