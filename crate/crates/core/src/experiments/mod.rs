//! Parameter-sweep harness.
//!
//! A sweep runs a grid of (protocol, node count, dephasing time, BSM
//! ideality) cells, each with a fixed number of independent Monte Carlo
//! trials, and aggregates per-cell statistics. Trials fan out to a rayon
//! pool; every trial's random stream is derived from the master seed and the
//! (cell, trial) counters, and per-trial values are reduced in trial order
//! with compensated summation, so output is byte-identical for a given spec
//! no matter how many workers run it.

mod spec;

pub use spec::{DEFAULT_MASTER_SEED, DEFAULT_TRIALS};

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{hashing_yield, FidelityResult, NetworkParams};
use crate::protocols::{simulate_trial, Accounting, ProtocolKind, TrialRng};

/// Full description of a sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub protocols: Vec<ProtocolKind>,
    pub node_values: Vec<u32>,
    pub dephasing_values_s: Vec<f64>,
    pub bsm_values: Vec<f64>,
    pub total_length_km: f64,
    pub attenuation_length_km: f64,
    pub fiber_speed_m_per_s: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub accounting: Accounting,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, list_len) in [
            ("protocols", self.protocols.len()),
            ("nodes", self.node_values.len()),
            ("t_dp_seconds", self.dephasing_values_s.len()),
            ("lambda_bsm", self.bsm_values.len()),
        ] {
            if list_len == 0 {
                return Err(Error::EmptyInput { what: name });
            }
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be at least 1".to_string()));
        }
        // every grid cell must form a valid network
        for &nodes in &self.node_values {
            for &t_dp in &self.dephasing_values_s {
                for &lambda in &self.bsm_values {
                    self.cell_params(nodes, t_dp, lambda)?.validate()?;
                }
            }
        }
        Ok(())
    }

    fn cell_params(&self, nodes: u32, dephasing_time_s: f64, bsm_ideality: f64) -> Result<NetworkParams> {
        let params = NetworkParams {
            num_nodes: nodes,
            total_length_km: self.total_length_km,
            attenuation_length_km: self.attenuation_length_km,
            fiber_speed_m_per_s: self.fiber_speed_m_per_s,
            dephasing_time_s,
            bsm_ideality,
        };
        params.validate()?;
        Ok(params)
    }

    /// Grid cells in output order: lexicographic in (protocol, nodes,
    /// dephasing time, BSM ideality), with each axis sorted ascending and
    /// deduplicated.
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut protocols = self.protocols.clone();
        protocols.sort();
        protocols.dedup();
        let mut nodes = self.node_values.clone();
        nodes.sort_unstable();
        nodes.dedup();
        let mut dephasing = self.dephasing_values_s.clone();
        dephasing.sort_by(f64::total_cmp);
        dephasing.dedup();
        let mut bsm = self.bsm_values.clone();
        bsm.sort_by(f64::total_cmp);
        bsm.dedup();

        let mut cells = Vec::new();
        for &protocol in &protocols {
            for &num_nodes in &nodes {
                for &dephasing_time_s in &dephasing {
                    for &bsm_ideality in &bsm {
                        cells.push(SweepCell {
                            index: cells.len() as u64,
                            protocol,
                            num_nodes,
                            dephasing_time_s,
                            bsm_ideality,
                        });
                    }
                }
            }
        }
        cells
    }
}

/// One grid cell, with its stable index used for seed derivation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub index: u64,
    pub protocol: ProtocolKind,
    pub num_nodes: u32,
    pub dephasing_time_s: f64,
    pub bsm_ideality: f64,
}

impl SweepCell {
    fn label(&self) -> String {
        format!(
            "protocol={} nodes={} t_dp={} lambda={}",
            self.protocol, self.num_nodes, self.dephasing_time_s, self.bsm_ideality
        )
    }
}

/// Aggregated statistics of one grid cell; one CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellStats {
    pub protocol: ProtocolKind,
    pub nodes: u32,
    pub dephasing_time_s: f64,
    pub bsm_ideality: f64,
    pub mean_fidelity: f64,
    pub fidelity_stderr: f64,
    /// Mean of per-trial yield/duration ratios.
    pub mean_hashing_rate: f64,
    pub hashing_rate_stderr: f64,
    /// Ratio-of-means alternative: yield of the mean fidelity over the mean
    /// duration.
    pub aggregate_hashing_rate: f64,
    pub mean_clock_s: f64,
    pub mean_memory_s: f64,
    pub trials: u64,
}

/// Run every trial of one cell, in trial order.
pub fn run_trials(
    params: &NetworkParams,
    protocol: ProtocolKind,
    accounting: Accounting,
    trials: u64,
    master_seed: u64,
    cell_index: u64,
) -> Result<Vec<FidelityResult>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = TrialRng::derive(master_seed, &[cell_index, trial]);
            simulate_trial(params, protocol, accounting, &mut rng)
        })
        .collect()
}

/// Mean and standard error of the per-trial hashing rate (yield over
/// protocol duration, one distributed pair per completion).
pub fn hashing_rate_estimator(results: &[FidelityResult]) -> Result<(f64, f64)> {
    if results.is_empty() {
        return Err(Error::EmptyInput {
            what: "trial results",
        });
    }
    let rates = results
        .iter()
        .map(|r| Ok(hashing_yield(r.fidelity)? / r.clock_time_s))
        .collect::<Result<Vec<f64>>>()?;
    Ok(mean_and_stderr(&rates))
}

/// Aggregate one cell's trials into a stats row.
pub fn aggregate_cell(
    cell: &SweepCell,
    trials: u64,
    results: &[FidelityResult],
) -> Result<CellStats> {
    let fidelities: Vec<f64> = results.iter().map(|r| r.fidelity).collect();
    let (mean_fidelity, fidelity_stderr) = mean_and_stderr(&fidelities);
    let (mean_hashing_rate, hashing_rate_stderr) = hashing_rate_estimator(results)?;
    let mean_clock_s = compensated_mean(results.iter().map(|r| r.clock_time_s));
    let mean_memory_s = compensated_mean(results.iter().map(|r| r.memory_time_s));
    let aggregate_hashing_rate = hashing_yield(mean_fidelity.clamp(0.0, 1.0))? / mean_clock_s;
    Ok(CellStats {
        protocol: cell.protocol,
        nodes: cell.num_nodes,
        dephasing_time_s: cell.dephasing_time_s,
        bsm_ideality: cell.bsm_ideality,
        mean_fidelity,
        fidelity_stderr,
        mean_hashing_rate,
        hashing_rate_stderr,
        aggregate_hashing_rate,
        mean_clock_s,
        mean_memory_s,
        trials,
    })
}

fn run_cell(spec: &SweepSpec, cell: &SweepCell) -> Result<CellStats> {
    let wrap = |source: Error| Error::Cell {
        cell: cell.label(),
        source: Box::new(source),
    };
    let params = spec
        .cell_params(cell.num_nodes, cell.dephasing_time_s, cell.bsm_ideality)
        .map_err(wrap)?;
    let results = run_trials(
        &params,
        cell.protocol,
        spec.accounting,
        spec.trials,
        spec.master_seed,
        cell.index,
    )
    .map_err(wrap)?;
    aggregate_cell(cell, spec.trials, &results).map_err(wrap)
}

/// Run the whole grid on the ambient rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<CellStats>> {
    run_sweep_with_progress(spec, |_, _| {})
}

/// Like [`run_sweep`], invoking `progress(completed_cell_index, total_cells)`
/// as cells finish (in scheduling order, which is not deterministic).
pub fn run_sweep_with_progress(
    spec: &SweepSpec,
    progress: impl Fn(u64, u64) + Sync,
) -> Result<Vec<CellStats>> {
    spec.validate()?;
    let cells = spec.cells();
    let total = cells.len() as u64;
    cells
        .par_iter()
        .map(|cell| {
            let stats = run_cell(spec, cell)?;
            progress(cell.index, total);
            Ok(stats)
        })
        .collect()
}

/// Write rows as RFC-4180 CSV with a header row; floats use the shortest
/// round-trip decimal form.
pub fn write_csv<W: Write>(rows: &[CellStats], writer: W) -> Result<()> {
    let mut csv_writer = csv::Writer::from_writer(writer);
    for row in rows {
        csv_writer.serialize(row)?;
    }
    csv_writer.flush()?;
    Ok(())
}

/// Write rows as a JSON array equivalent to the CSV output.
pub fn write_json<W: Write>(rows: &[CellStats], mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, rows)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn csv_bytes(rows: &[CellStats]) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    write_csv(rows, &mut bytes)?;
    Ok(bytes)
}

/// Neumaier-compensated sum; reduction order is the iterator order.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for value in values {
        let tentative = sum + value;
        if sum.abs() >= value.abs() {
            compensation += (sum - tentative) + value;
        } else {
            compensation += (value - tentative) + sum;
        }
        sum = tentative;
    }
    sum + compensation
}

fn compensated_mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len() as f64;
    compensated_sum(values) / n
}

/// Two-pass mean and standard error of the mean (0 for a single sample).
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let variance = compensated_sum(values.iter().map(|v| (v - mean).powi(2))) / (n - 1.0);
    (mean, (variance / n).sqrt())
}
