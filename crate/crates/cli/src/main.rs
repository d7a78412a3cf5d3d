//! `coarse-metric`: reproducible batch experiments.
//!
//! Exit codes: 0 all checks pass, 2 a bound or axiom was violated, 3 bad
//! configuration, 4 enumeration budget exceeded, 1 anything else.

mod commands;
mod config;
mod error;
mod groups;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Report;
use crate::config::{Experiment, ExperimentConfig, Settings, BUDGET_VAR};
use crate::error::CliResult;

#[derive(Parser)]
#[command(
    name = "coarse-metric",
    version,
    about = "Word metrics, growth, coarse lattices and cocycle embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sphere census and growth certificate
    Growth(Common),
    /// Cocycle embedding constants and identity sweep
    Embed(Common),
    /// Greedy coarse lattice and bounded-geometry census
    Lattice(Common),
    /// Run the invariant suite (default menu without --config)
    Verify(Common),
    /// Matrix norms and metric checks on GL(n)
    Gl(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment config
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: config `out_dir`, else `out`)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of cocycle layers (embed)
    #[arg(long)]
    truncation: Option<u64>,
}

fn run(kind: Experiment, args: Common) -> CliResult<Report> {
    let config = match &args.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None if kind == Experiment::Verify => ExperimentConfig::default(),
        None => return Err(error::CliError::config("--config is required")),
    };
    let settings = Settings::resolve(
        config,
        kind,
        args.out,
        args.seed,
        args.truncation,
        std::env::var(BUDGET_VAR).ok(),
    )?;
    match kind {
        Experiment::Growth => commands::growth::run(&settings),
        Experiment::Embed => commands::embed::run(&settings),
        Experiment::Lattice => commands::lattice::run(&settings),
        Experiment::Verify => commands::verify::run(&settings),
        Experiment::Gl => commands::gl::run(&settings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Growth(a) => (Experiment::Growth, a),
        Command::Embed(a) => (Experiment::Embed, a),
        Command::Lattice(a) => (Experiment::Lattice, a),
        Command::Verify(a) => (Experiment::Verify, a),
        Command::Gl(a) => (Experiment::Gl, a),
    };
    match run(kind, args) {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            for f in &report.failures {
                eprintln!("violation: {f}");
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
