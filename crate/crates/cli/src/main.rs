//! `treepress --config <path> --command <name> [--out <path>] [--mode serial|parallel]`
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime error.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use treepress::FoldMode;

use crate::commands::Command;
use crate::config::ExperimentConfig;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Serial,
    Parallel,
}

#[derive(Debug, Parser)]
#[command(name = "treepress", version, about = "Tree pressure experiments on interval maps")]
struct Args {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// One of tree-pressure, compare, exceptional, normality, hyperbolicity,
    /// cohomology, sigma-prime, lower-bound.
    #[arg(long)]
    command: String,
    /// Output file; falls back to the config's `out`, then to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fold mode; overrides the config's `mode`.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let command = Command::parse(&args.command)?;
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = ExperimentConfig::parse(&text)?;
    let mode = match args.mode {
        Some(Mode::Serial) => FoldMode::Serial,
        Some(Mode::Parallel) => FoldMode::ParallelDeterministic,
        None => cfg.mode.unwrap_or_default(),
    };
    let output = commands::run(command, &cfg, mode)?;
    match args.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from)) {
        Some(path) => std::fs::write(path, output)?,
        None => print!("{output}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("treepress: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
