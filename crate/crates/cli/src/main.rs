//! `ddfrac`: data-driven crack propagation experiments from a JSON config.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ddfrac::SolverKind;

use commands::Context;
use config::ExperimentConfig;
use error::CliError;

#[derive(Parser)]
#[command(name = "ddfrac", version, about = "Data-driven brittle fracture solvers for DCB specimens")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a resistance data set (CSV plus JSON metadata).
    Generate(Common),
    /// Run a solver over the load program and write the trace.
    Solve(Common),
    /// Run the model-based reference matching the configured solver.
    Reference(Common),
    /// Monte Carlo convergence study against the reference.
    Converge(Common),
    /// Error between two traces plus per-step residuals.
    Compare {
        trace: PathBuf,
        reference: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `dataset.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `solver.kind`.
    #[arg(long, value_parser = commands::parse_solver)]
    solver: Option<SolverKind>,
}

impl Common {
    fn context(&self) -> Result<Context, CliError> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.dataset.seed = seed;
        }
        if let Some(kind) = self.solver {
            cfg.solver.kind = kind;
        }
        let out = self.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
        let resolved = cfg.resolve()?;
        let ctx = Context { cfg, resolved, out };
        ctx.record()?;
        Ok(ctx)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(c) => commands::generate(&c.context()?),
        Command::Solve(c) => commands::solve(&c.context()?),
        Command::Reference(c) => commands::reference(&c.context()?),
        Command::Converge(c) => commands::converge(&c.context()?),
        Command::Compare { trace, reference, out } => commands::compare(&trace, &reference, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
