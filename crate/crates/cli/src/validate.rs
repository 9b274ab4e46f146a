use bellchain::oracle::suite::{run_suite, SuiteOptions};
use clap::Args;

use crate::{CliError, CliResult};

#[derive(Args)]
pub struct ValidateArgs {
    /// Override the absolute tolerance of every deterministic check
    /// (dimensionless); statistical checks keep their 3-standard-error band
    #[arg(long)]
    tolerance: Option<f64>,

    /// Run only checks whose name contains this substring
    #[arg(long)]
    only: Option<String>,
}

pub fn execute(args: ValidateArgs) -> CliResult {
    if let Some(tolerance) = args.tolerance {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(CliError::Usage(format!(
                "tolerance must be positive (got {tolerance})"
            )));
        }
    }
    let results = run_suite(&SuiteOptions {
        tolerance_override: args.tolerance,
        only: args.only.clone(),
    });
    if results.is_empty() {
        return Err(CliError::Usage(format!(
            "no checks match filter `{}`",
            args.only.unwrap_or_default()
        )));
    }

    println!("{:<34}{:>14}{:>14}  result", "check", "tolerance", "deviation");
    let mut failures = Vec::new();
    for check in &results {
        let unit = if check.sigma_units { " sigma" } else { "" };
        println!(
            "{:<34}{:>14}{:>14}  {}",
            check.name,
            format!("{:.1e}{unit}", check.tolerance),
            format!("{:.3e}{unit}", check.deviation),
            if check.passed { "PASS" } else { "FAIL" }
        );
        if !check.passed {
            failures.push(format!(
                "{} deviated by {:.3e}{unit} (tolerance {:.1e}{unit})",
                check.name, check.deviation, check.tolerance
            ));
        }
    }

    if failures.is_empty() {
        println!("all {} checks passed", results.len());
        Ok(())
    } else {
        Err(CliError::Runtime(format!(
            "{} of {} checks failed: {}",
            failures.len(),
            results.len(),
            failures.join("; ")
        )))
    }
}
