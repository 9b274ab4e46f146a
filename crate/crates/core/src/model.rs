//! Closed-form physics of a linear repeater chain.
//!
//! Everything here is a pure function: fiber transmission probability,
//! memory dephasing probability, the two-pair mixing parameters and their
//! swap composition law, the end-to-end fidelity of a distributed Bell
//! pair, and the distillation metrics (hashing yield and hashing rate).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fiber attenuation length at telecom wavelengths, kilometers.
pub const DEFAULT_ATTENUATION_LENGTH_KM: f64 = 22.0;

/// Speed of light in optical fiber, meters per second.
pub const DEFAULT_FIBER_SPEED_M_PER_S: f64 = 2.0e8;

/// Static description of a linear chain: a sender, a receiver, and
/// `num_nodes - 2` repeaters evenly spaced along `total_length_km` of fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// Total node count including both end nodes; at least 2.
    pub num_nodes: u32,
    /// End-to-end chain length, kilometers.
    pub total_length_km: f64,
    /// Fiber attenuation length, kilometers.
    pub attenuation_length_km: f64,
    /// Speed of light in fiber, meters per second.
    pub fiber_speed_m_per_s: f64,
    /// Memory dephasing time, seconds.
    pub dephasing_time_s: f64,
    /// Bell-state-measurement ideality, in `[0, 1]`; 1 is a perfect measurement.
    pub bsm_ideality: f64,
}

impl NetworkParams {
    /// A chain with default fiber constants and a perfect BSM.
    pub fn new(num_nodes: u32, total_length_km: f64, dephasing_time_s: f64) -> Result<Self> {
        let params = NetworkParams {
            num_nodes,
            total_length_km,
            attenuation_length_km: DEFAULT_ATTENUATION_LENGTH_KM,
            fiber_speed_m_per_s: DEFAULT_FIBER_SPEED_M_PER_S,
            dephasing_time_s,
            bsm_ideality: 1.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_bsm_ideality(mut self, bsm_ideality: f64) -> Result<Self> {
        self.bsm_ideality = bsm_ideality;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_nodes < 2 {
            return Err(Error::invalid(
                "num_nodes",
                format!("must be at least 2 (got {})", self.num_nodes),
            ));
        }
        for (name, value) in [
            ("total_length_km", self.total_length_km),
            ("attenuation_length_km", self.attenuation_length_km),
            ("fiber_speed_m_per_s", self.fiber_speed_m_per_s),
            ("dephasing_time_s", self.dephasing_time_s),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::invalid(
                    name,
                    format!("must be a positive finite number (got {value})"),
                ));
            }
        }
        if !(0.0..=1.0).contains(&self.bsm_ideality) {
            return Err(Error::invalid(
                "bsm_ideality",
                format!("must lie in [0, 1] (got {})", self.bsm_ideality),
            ));
        }
        Ok(())
    }

    /// Number of adjacent-node links, `N - 1`.
    pub fn num_links(&self) -> u32 {
        self.num_nodes - 1
    }

    /// Number of entanglement swaps needed end to end, `N - 2`.
    pub fn num_swaps(&self) -> u32 {
        self.num_nodes - 2
    }

    /// Distance between adjacent nodes, kilometers.
    pub fn internode_length_km(&self) -> f64 {
        self.total_length_km / self.num_links() as f64
    }

    /// Per-attempt entanglement generation success probability on one link.
    pub fn success_prob(&self) -> f64 {
        (-self.internode_length_km() / self.attenuation_length_km).exp()
    }

    /// Duration of one normalized time unit (internode distance / fiber speed), seconds.
    pub fn time_unit_s(&self) -> f64 {
        self.internode_length_km() * 1000.0 / self.fiber_speed_m_per_s
    }
}

/// Outcome of a single distribution trial, converted to physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityResult {
    /// Fidelity of the distributed pair with the target Bell state, in `[0, 1]`.
    pub fidelity: f64,
    /// Cumulative quantum memory time over all surviving qubits, seconds.
    pub memory_time_s: f64,
    /// Wall-clock duration of the protocol, seconds.
    pub clock_time_s: f64,
}

/// Probability that a photon survives `internode_length_km` of fiber, i.e. the
/// per-attempt entanglement generation success probability.
///
/// Transmission decays exponentially with distance: `exp(-L / L_att)`.
pub fn channel_success_prob(internode_length_km: f64, attenuation_length_km: f64) -> Result<f64> {
    if internode_length_km.is_nan() || internode_length_km <= 0.0 {
        return Err(Error::invalid(
            "internode_length_km",
            format!("must be positive (got {internode_length_km})"),
        ));
    }
    if attenuation_length_km.is_nan() || attenuation_length_km <= 0.0 {
        return Err(Error::invalid(
            "attenuation_length_km",
            format!("must be positive (got {attenuation_length_km})"),
        ));
    }
    Ok((-internode_length_km / attenuation_length_km).exp())
}

/// Probability that a qubit stored in memory for `time_s` suffers a phase flip:
/// `(1 - exp(-t / T_dp)) / 2`, ranging from 0 at `t = 0` towards 1/2.
pub fn dephase_prob(time_s: f64, dephasing_time_s: f64) -> Result<f64> {
    if time_s.is_nan() || time_s < 0.0 {
        return Err(Error::invalid(
            "time_s",
            format!("must be non-negative (got {time_s})"),
        ));
    }
    if dephasing_time_s.is_nan() || dephasing_time_s <= 0.0 {
        return Err(Error::invalid(
            "dephasing_time_s",
            format!("must be positive (got {dephasing_time_s})"),
        ));
    }
    Ok((1.0 - (-time_s / dephasing_time_s).exp()) / 2.0)
}

/// Mixing parameters of a Bell pair whose two qubits dephased with
/// probabilities `p_x` and `p_y`.
///
/// `alpha` is the surviving target-state weight, `beta` the phase-flipped
/// weight: `beta = p_x + p_y - 2 p_x p_y` (exactly one flip), `alpha = 1 - beta`.
/// The pair `(alpha, beta)` always sums to exactly 1.
pub fn alpha_beta(p_x: f64, p_y: f64) -> Result<(f64, f64)> {
    for (name, p) in [("p_x", p_x), ("p_y", p_y)] {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::invalid(
                name,
                format!("dephasing probability must lie in [0, 1/2] (got {p})"),
            ));
        }
    }
    let beta = p_x + p_y - 2.0 * p_x * p_y;
    Ok((1.0 - beta, beta))
}

/// Swap composition law: merging two pairs with mixing parameters `(a1, b1)`
/// and `(a2, b2)` through an ideal Bell-state measurement yields a pair with
/// parameters `(a1 a2 + b1 b2, a1 b2 + b1 a2)`.
pub fn compose_alpha_beta(first: (f64, f64), second: (f64, f64)) -> (f64, f64) {
    let (a1, b1) = first;
    let (a2, b2) = second;
    (a1 * a2 + b1 * b2, a1 * b2 + b1 * a2)
}

/// End-to-end fidelity of the distributed Bell pair after the chain's
/// `N - 2` swaps, given the cumulative memory time of all qubits:
///
/// `lambda_bsm^(N-2) / 2 * (1 + exp(-T / T_dp))`
///
/// Dephasing depends only on the total memory time, not on how that time is
/// split among qubits, and each imperfect swap contributes one ideality factor.
pub fn closed_form_fidelity(total_memory_time_s: f64, params: &NetworkParams) -> Result<f64> {
    params.validate()?;
    if total_memory_time_s.is_nan() || total_memory_time_s < 0.0 {
        return Err(Error::invalid(
            "total_memory_time_s",
            format!("must be non-negative (got {total_memory_time_s})"),
        ));
    }
    let ideality = params.bsm_ideality.powi(params.num_swaps() as i32);
    Ok(ideality / 2.0 * (1.0 + (-total_memory_time_s / params.dephasing_time_s).exp()))
}

/// Near-perfect Bell pairs distillable per noisy input pair of fidelity `F`
/// under the hashing protocol:
///
/// `max(0, 1 + F log2 F + (1 - F) log2((1 - F) / 3))`
///
/// The raw expression is negative below a threshold fidelity near 0.8107;
/// a negative distillation yield is unphysical, so it clamps to 0 there.
pub fn hashing_yield(fidelity: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::invalid(
            "fidelity",
            format!("must lie in [0, 1] (got {fidelity})"),
        ));
    }
    let rest = 1.0 - fidelity;
    let raw = 1.0 + xlog2(fidelity) + xlog2(rest) - rest * 3f64.log2();
    Ok(raw.max(0.0))
}

/// `x log2 x`, extended by continuity to 0 at `x = 0`.
fn xlog2(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Distilled pairs per second: hashing yield times the pair delivery rate,
/// taking one distributed pair per protocol completion.
pub fn hashing_rate(fidelity: f64, clock_time_s: f64) -> Result<f64> {
    if clock_time_s.is_nan() || clock_time_s <= 0.0 {
        return Err(Error::invalid(
            "clock_time_s",
            format!("must be positive (got {clock_time_s})"),
        ));
    }
    Ok(hashing_yield(fidelity)? / clock_time_s)
}

/// Convert a normalized protocol time (units of internode distance / fiber
/// speed) to seconds.
pub fn normalized_time_to_seconds(units: f64, params: &NetworkParams) -> f64 {
    debug_assert!(units >= 0.0);
    units * params.time_unit_s()
}
