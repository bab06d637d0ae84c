//! `bsfem`: runs superposed-mesh Poisson experiments and writes CSV/JSON
//! results.

mod config;
mod output;
mod runner;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunArgs, RunConfig};
use runner::Status;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("CSV output: {0}")]
    Csv(String),
    #[error("JSON output: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] bsfem::Error),
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "bsfem", version, about = "Superposed-mesh finite element experiments for the 3D Poisson problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one pairing on one or more meshes.
    Run(RunArgs),
    /// Solve every pairing and case selected by the filters on every mesh.
    Matrix(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.command {
        Command::Run(args) => args.merged().and_then(RunConfig::single),
        Command::Matrix(args) => args.merged().and_then(RunConfig::grid),
    };
    let config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match runner::run(&config) {
        Ok(summary) => {
            let failed = summary.count(Status::Failed);
            println!(
                "{} solved, {} reused, {} failed; series in {}",
                summary.count(Status::Solved),
                summary.count(Status::Reused),
                failed,
                summary.series.display()
            );
            if failed > 0 {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
