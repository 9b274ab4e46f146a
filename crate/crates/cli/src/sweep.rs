use std::path::{Path, PathBuf};

use bellchain::experiments::{run_sweep_with_progress, write_csv, write_json};
use bellchain::SweepSpec;
use clap::Args;

use crate::{CliError, CliResult};

#[derive(Args)]
pub struct SweepArgs {
    /// Sweep spec file: flat `key = value` text, lists comma-separated,
    /// float lists accept logrange(start,stop,count)
    #[arg(long)]
    spec: PathBuf,

    /// Output base path; writes `<base>.csv` and `<base>.json`
    #[arg(long)]
    output: PathBuf,
}

pub fn execute(args: SweepArgs) -> CliResult {
    let spec = SweepSpec::from_file(&args.spec)?;
    let cells = spec.cells();
    eprintln!(
        "sweep: {} cells x {} trials (seed {})",
        cells.len(),
        spec.trials,
        spec.master_seed
    );

    let rows = run_sweep_with_progress(&spec, |cell, total| {
        eprintln!("  cell {}/{} done", cell + 1, total);
    })?;

    // serialize fully before touching the filesystem so a failed command
    // leaves no output file behind
    let mut csv_buffer = Vec::new();
    write_csv(&rows, &mut csv_buffer)?;
    let mut json_buffer = Vec::new();
    write_json(&rows, &mut json_buffer)?;

    let csv_path = with_extension(&args.output, "csv");
    let json_path = with_extension(&args.output, "json");
    std::fs::write(&csv_path, csv_buffer)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", csv_path.display())))?;
    if let Err(e) = std::fs::write(&json_path, json_buffer) {
        let _ = std::fs::remove_file(&csv_path);
        return Err(CliError::Runtime(format!(
            "cannot write {}: {e}",
            json_path.display()
        )));
    }
    println!(
        "wrote {} rows to {} and {}",
        rows.len(),
        csv_path.display(),
        json_path.display()
    );
    Ok(())
}

fn with_extension(base: &Path, extension: &str) -> PathBuf {
    let mut path = base.as_os_str().to_owned();
    path.push(".");
    path.push(extension);
    PathBuf::from(path)
}
