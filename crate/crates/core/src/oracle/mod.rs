//! Exact brute-force reference engine.
//!
//! Dense density matrices independently re-derive every closed-form quantity
//! in [`crate::model`]: the dephasing mixture, the swap composition, the
//! ideality factor per imperfect measurement, and the total-memory-time
//! fidelity law. Statevectors cover the noiseless multipartite swap check,
//! and the analytic expectations here back the Monte Carlo mean tests.

mod density;
mod statevector;
pub mod suite;

pub use density::DensityMatrix;
pub use statevector::Statevector;

use crate::error::{Error, Result};
use crate::model::NetworkParams;

fn validate_chain_inputs(
    times_s: &[f64],
    bsm_idealities: &[f64],
    dephasing_time_s: f64,
) -> Result<usize> {
    if times_s.len() != 4 && times_s.len() != 6 {
        return Err(Error::LengthMismatch {
            what: "per-qubit memory times",
            expected: 4,
            actual: times_s.len(),
        });
    }
    let pairs = times_s.len() / 2;
    if bsm_idealities.len() != pairs - 1 {
        return Err(Error::LengthMismatch {
            what: "per-swap idealities",
            expected: pairs - 1,
            actual: bsm_idealities.len(),
        });
    }
    for &t in times_s {
        if t.is_nan() || t < 0.0 {
            return Err(Error::invalid("times_s", format!("must be non-negative (got {t})")));
        }
    }
    for &lambda in bsm_idealities {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::invalid(
                "bsm_idealities",
                format!("must lie in [0, 1] (got {lambda})"),
            ));
        }
    }
    if dephasing_time_s.is_nan() || dephasing_time_s <= 0.0 {
        return Err(Error::invalid(
            "dephasing_time_s",
            format!("must be positive (got {dephasing_time_s})"),
        ));
    }
    Ok(pairs)
}

/// Dephased pair chain before any swap: one Bell pair per qubit pair, each
/// qubit aged by its own memory time.
fn dephased_chain(times_s: &[f64], dephasing_time_s: f64) -> Result<DensityMatrix> {
    let pairs = times_s.len() / 2;
    let mut chain = DensityMatrix::bell_pair();
    for _ in 1..pairs {
        chain = chain.tensor(&DensityMatrix::bell_pair());
    }
    for (qubit, &t) in times_s.iter().enumerate() {
        chain.apply_dephasing(qubit, t, dephasing_time_s)?;
    }
    Ok(chain)
}

/// End-to-end Bell-pair fidelity computed from the full quantum state.
///
/// Builds the dephased pair chain and swaps it down to a single pair,
/// measuring the middle qubits of the leftmost two pairs at each step. An
/// imperfect measurement is a mixture of an ideal measurement (weight
/// `lambda`) and a failure branch whose output carries no entanglement; the
/// target-state amplitude therefore gains one `lambda` factor per swap, and
/// the failure branch is dropped rather than tracked. This routine shares no
/// algebra with [`crate::model::closed_form_fidelity`]; agreement between the
/// two is the central correctness check of this crate.
pub fn oracle_fidelity(times_s: &[f64], bsm_idealities: &[f64], dephasing_time_s: f64) -> Result<f64> {
    validate_chain_inputs(times_s, bsm_idealities, dephasing_time_s)?;
    let mut state = dephased_chain(times_s, dephasing_time_s)?;
    let mut weight = 1.0;
    for &lambda in bsm_idealities {
        weight *= lambda;
        // after each projection the register compacts, so the measured pair
        // is always qubits (1, 2) of the current state
        state = state.bsm_project((1, 2))?;
    }
    Ok(weight * state.fidelity_phi_plus()?)
}

/// Same chain, but with the depolarizing channel applied in full before each
/// projection, failure branch included.
///
/// The surviving failure branches are fully mixed on the final pair, so this
/// exceeds [`oracle_fidelity`] by exactly `(1 - prod(lambda)) / 4`; tests
/// assert that relation.
pub fn oracle_fidelity_full_channel(
    times_s: &[f64],
    bsm_idealities: &[f64],
    dephasing_time_s: f64,
) -> Result<f64> {
    validate_chain_inputs(times_s, bsm_idealities, dephasing_time_s)?;
    let mut state = dephased_chain(times_s, dephasing_time_s)?;
    for &lambda in bsm_idealities {
        state.apply_depolarizing_2q((1, 2), lambda)?;
        state = state.bsm_project((1, 2))?;
    }
    state.fidelity_phi_plus()
}

/// Noiseless multipartite swap: extend an `n`-party GHZ state through one
/// repeater and report the overlap with the relabeled GHZ state. Must be 1.
pub fn ghz_swap_check(arity: usize) -> Result<f64> {
    if !(2..=11).contains(&arity) {
        return Err(Error::invalid(
            "arity",
            format!("GHZ arity must lie in [2, 11] (got {arity})"),
        ));
    }
    // register: GHZ over qubits 0..arity (the last being the leg to swap),
    // fresh Bell pair on the next two qubits
    let state = Statevector::ghz(arity).tensor(&Statevector::ghz(2));
    let (projected, _prob) = state.project_bell_pair((arity - 1, arity))?;
    Ok(projected.overlap(&Statevector::ghz(arity)).norm_sqr())
}

/// Analytic mean protocol duration of the sequential protocol, normalized
/// units: each link needs geometrically many attempts, so the expectation is
/// `2 (N - 1) / p`.
pub fn expected_clock_sequential(params: &NetworkParams) -> Result<f64> {
    params.validate()?;
    expected_clock_sequential_for(params.num_links(), params.success_prob())
}

pub fn expected_clock_sequential_for(num_links: u32, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 || p > 1.0 {
        return Err(Error::invalid("p", format!("must lie in (0, 1] (got {p})")));
    }
    Ok(2.0 * num_links as f64 / p)
}

/// Analytic mean round count of the parallel protocol: the maximum of
/// `N - 1` independent geometric variables, summed by inclusion-exclusion as
/// `sum_k [1 - (1 - q^k)^(N-1)]` with `q = 1 - p`, truncated once a term
/// drops below `truncation_tol`.
pub fn expected_rounds_parallel(params: &NetworkParams, truncation_tol: f64) -> Result<f64> {
    params.validate()?;
    expected_rounds_parallel_for(params.num_links(), params.success_prob(), truncation_tol)
}

pub fn expected_rounds_parallel_for(num_links: u32, p: f64, truncation_tol: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 || p > 1.0 {
        return Err(Error::invalid("p", format!("must lie in (0, 1] (got {p})")));
    }
    if truncation_tol.is_nan() || truncation_tol <= 0.0 {
        return Err(Error::invalid(
            "truncation_tol",
            format!("must be positive (got {truncation_tol})"),
        ));
    }
    let q = 1.0 - p;
    let mut total = 0.0;
    let mut q_pow: f64 = 1.0;
    loop {
        let term = 1.0 - (1.0 - q_pow).powi(num_links as i32);
        if term < truncation_tol {
            break;
        }
        total += term;
        q_pow *= q;
    }
    Ok(total)
}
