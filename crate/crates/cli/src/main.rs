//! `bellchain` command line: single-configuration runs, parameter sweeps,
//! and the exact-model validation suite.

mod run;
mod sweep;
mod validate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bellchain",
    version,
    about = "Monte Carlo simulation of Bell-pair distribution over a linear repeater chain",
    after_help = "Set BELLCHAIN_WORKERS to override the worker-pool size used by sweeps \
                  and trial batches (defaults to the number of logical CPUs). All commands \
                  are deterministic given their flags, including the seed."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one network configuration and print summary statistics
    Run(run::RunArgs),
    /// Run a parameter-sweep spec file and write CSV + JSON results
    Sweep(sweep::SweepArgs),
    /// Run the validation suite that cross-checks the exact quantum engine,
    /// the closed-form model, and the Monte Carlo engines
    Validate(validate::ValidateArgs),
}

/// Command failures split by exit status: usage problems exit 2, runtime
/// failures exit 1.
pub enum CliError {
    Usage(String),
    Runtime(String),
}

pub type CliResult = Result<(), CliError>;

impl From<bellchain::Error> for CliError {
    fn from(err: bellchain::Error) -> Self {
        if err.is_usage() {
            CliError::Usage(err.to_string())
        } else {
            CliError::Runtime(err.to_string())
        }
    }
}

fn configure_worker_pool() -> CliResult {
    if let Ok(value) = std::env::var("BELLCHAIN_WORKERS") {
        let workers: usize = value.parse().map_err(|_| {
            CliError::Usage(format!(
                "BELLCHAIN_WORKERS must be a positive integer (got `{value}`)"
            ))
        })?;
        if workers == 0 {
            return Err(CliError::Usage(
                "BELLCHAIN_WORKERS must be a positive integer (got `0`)".to_string(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("failed to build worker pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_worker_pool().and_then(|()| match cli.command {
        Command::Run(args) => run::execute(args),
        Command::Sweep(args) => sweep::execute(args),
        Command::Validate(args) => validate::execute(args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
