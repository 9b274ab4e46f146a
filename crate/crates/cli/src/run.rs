use std::path::PathBuf;

use bellchain::experiments::{aggregate_cell, run_trials, SweepCell, DEFAULT_MASTER_SEED};
use bellchain::model::{hashing_yield, NetworkParams};
use bellchain::protocols::{Accounting, ProtocolKind};
use clap::{Args, ValueEnum};

use crate::{CliError, CliResult};

#[derive(Clone, Copy, ValueEnum)]
pub enum ProtocolArg {
    Sequential,
    Parallel,
}

impl From<ProtocolArg> for ProtocolKind {
    fn from(arg: ProtocolArg) -> Self {
        match arg {
            ProtocolArg::Sequential => ProtocolKind::Sequential,
            ProtocolArg::Parallel => ProtocolKind::Parallel,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AccountingArg {
    /// Clock and held-chain memory accrue on every generation attempt
    PerAttempt,
    /// Clock and held-chain memory accrue only on successful attempts
    Literal,
}

impl From<AccountingArg> for Accounting {
    fn from(arg: AccountingArg) -> Self {
        match arg {
            AccountingArg::PerAttempt => Accounting::PerAttempt,
            AccountingArg::Literal => Accounting::LiteralPseudocode,
        }
    }
}

#[derive(Args)]
pub struct RunArgs {
    /// Distribution protocol (dimensionless choice)
    #[arg(long, value_enum)]
    protocol: ProtocolArg,

    /// Node count including both end nodes (dimensionless, at least 2)
    #[arg(long)]
    nodes: u32,

    /// Total chain length (km)
    #[arg(long, default_value_t = 50.0)]
    length_km: f64,

    /// Fiber attenuation length (km)
    #[arg(long, default_value_t = 22.0)]
    attenuation_km: f64,

    /// Speed of light in fiber (meters/second)
    #[arg(long, default_value_t = 2.0e8)]
    fiber_speed: f64,

    /// Memory dephasing time (seconds)
    #[arg(long)]
    t_dp: f64,

    /// Bell-state-measurement ideality (dimensionless, in [0, 1])
    #[arg(long, default_value_t = 1.0)]
    lambda_bsm: f64,

    /// Monte Carlo trial count (dimensionless)
    #[arg(long, default_value_t = 10_000)]
    trials: u64,

    /// Master seed (64-bit integer), or `random` for an entropy-chosen seed
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED.to_string())]
    seed: String,

    /// Sequential-protocol bookkeeping mode (dimensionless choice)
    #[arg(long, value_enum, default_value = "per-attempt")]
    accounting: AccountingArg,

    /// Optional per-trial CSV output path
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn execute(args: RunArgs) -> CliResult {
    let (seed, seed_note) = parse_seed(&args.seed)?;
    let params = NetworkParams {
        num_nodes: args.nodes,
        total_length_km: args.length_km,
        attenuation_length_km: args.attenuation_km,
        fiber_speed_m_per_s: args.fiber_speed,
        dephasing_time_s: args.t_dp,
        bsm_ideality: args.lambda_bsm,
    };
    params.validate()?;
    if args.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".to_string()));
    }

    let protocol: ProtocolKind = args.protocol.into();
    let accounting: Accounting = args.accounting.into();
    let results = run_trials(&params, protocol, accounting, args.trials, seed, 0)?;
    let cell = SweepCell {
        index: 0,
        protocol,
        num_nodes: args.nodes,
        dephasing_time_s: args.t_dp,
        bsm_ideality: args.lambda_bsm,
    };
    let stats = aggregate_cell(&cell, args.trials, &results)?;

    let line = |label: &str, value: String| println!("{label:<22}{value}");
    line("protocol", protocol.to_string());
    line("accounting", accounting.to_string());
    line("nodes", args.nodes.to_string());
    line("total length", format!("{} km", args.length_km));
    line(
        "internode length",
        format!("{:.6} km", params.internode_length_km()),
    );
    line("attenuation length", format!("{} km", args.attenuation_km));
    line("fiber speed", format!("{} m/s", args.fiber_speed));
    line("generation success p", format!("{:.6}", params.success_prob()));
    line("dephasing time", format!("{} s", args.t_dp));
    line("bsm ideality", args.lambda_bsm.to_string());
    line("trials", args.trials.to_string());
    line("seed", format!("{seed}{seed_note}"));
    line(
        "mean fidelity",
        format!("{:.6} ± {:.6}", stats.mean_fidelity, stats.fidelity_stderr),
    );
    line(
        "mean hashing rate",
        format!(
            "{:.4} ± {:.4} per second",
            stats.mean_hashing_rate, stats.hashing_rate_stderr
        ),
    );
    line(
        "aggregate rate",
        format!("{:.4} per second", stats.aggregate_hashing_rate),
    );
    line("mean memory time", format!("{:.6e} s", stats.mean_memory_s));
    line("mean clock time", format!("{:.6e} s", stats.mean_clock_s));

    if let Some(path) = &args.output {
        let mut bytes = Vec::new();
        {
            let mut writer = csv::Writer::from_writer(&mut bytes);
            writer
                .write_record(["trial", "fidelity", "memory_time_s", "clock_time_s", "hashing_rate"])
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            for (trial, result) in results.iter().enumerate() {
                let rate = hashing_yield(result.fidelity)? / result.clock_time_s;
                writer
                    .write_record([
                        trial.to_string(),
                        result.fidelity.to_string(),
                        result.memory_time_s.to_string(),
                        result.clock_time_s.to_string(),
                        rate.to_string(),
                    ])
                    .map_err(|e| CliError::Runtime(e.to_string()))?;
            }
            writer.flush().map_err(|e| CliError::Runtime(e.to_string()))?;
        }
        std::fs::write(path, bytes)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        eprintln!("wrote {} per-trial rows to {}", args.trials, path.display());
    }
    Ok(())
}

fn parse_seed(seed: &str) -> Result<(u64, &'static str), CliError> {
    if seed.eq_ignore_ascii_case("random") {
        Ok((rand::random::<u64>(), " (entropy-chosen)"))
    } else {
        seed.parse::<u64>()
            .map(|s| (s, ""))
            .map_err(|_| CliError::Usage(format!("seed must be a 64-bit integer or `random` (got `{seed}`)")))
    }
}
