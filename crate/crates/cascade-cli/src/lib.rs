//! Command-line front end: parameter ingestion, sweeps, CSV emission, figure
//! presets and the verification harness. The binary (`cascade`) is a thin
//! wrapper around [`run`] so every command is exercisable from tests.

pub mod args;
pub mod commands;

use args::{Cli, Command};
use thiserror::Error;

/// Command-line failure classes, mapped onto process exit codes:
/// usage 1, validation 2, verification 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

/// Dispatch a parsed invocation.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let params = commands::load_params(cli.params.as_deref())?;
    let context = commands::Context {
        params,
        method: cli.method,
        tolerance: cli.tolerance,
        out: cli.out.clone(),
    };
    match cli.command {
        Command::Populations { t_max, points } => {
            commands::cmd_populations(&context, t_max, points)
        }
        Command::G2 {
            setting1,
            setting2,
            tau_max,
            points,
        } => commands::cmd_g2(&context, &setting1, &setting2, tau_max, points),
        Command::Degree {
            basis,
            tau_max,
            points,
        } => commands::cmd_degree(&context, &basis, tau_max, points),
        Command::DegreeAvg { points } => commands::cmd_degree_avg(&context, points),
        Command::Figure { id, outdir } => commands::cmd_figure(&id, &outdir),
        Command::Verify {
            sets,
            tau_points,
            tau_max,
            seed,
        } => commands::cmd_verify(&context, sets, tau_points, tau_max, seed),
    }
}
