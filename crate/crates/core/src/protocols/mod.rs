//! Monte Carlo engines for the two asynchronous distribution protocols.
//!
//! Both engines work in normalized time (one unit = internode distance /
//! fiber speed) and integer accumulators, so a trial's outcome is exact and
//! bit-identical for a given seed. [`simulate_trial`] converts the outcome
//! to seconds and attaches the closed-form fidelity.

mod rng;

pub use rng::TrialRng;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{closed_form_fidelity, normalized_time_to_seconds, FidelityResult, NetworkParams};

/// Wall-clock cost of one generation attempt (photon flight + confirmation),
/// normalized units.
pub const CLOCK_STEP: u64 = 2;
/// Memory time acquired by a successfully generated link: 2 units at the
/// source node plus 1 at the receiving node.
pub const MEMORY_PER_SUCCESS: u64 = 3;
/// Memory time acquired by an established pair's two end qubits while one
/// generation attempt runs.
pub const MEMORY_PER_HELD_PAIR: u64 = 4;

/// Give up on a trial after this many generation attempts.
pub const DEFAULT_ATTEMPT_CAP: u64 = 10_000_000;

/// Which distribution protocol drives a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    /// All unestablished links attempt generation each round.
    Parallel,
    /// Links are established one at a time from the sender outward.
    Sequential,
}

impl ProtocolKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProtocolKind::Parallel => "parallel",
            ProtocolKind::Sequential => "sequential",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "parallel" => Ok(ProtocolKind::Parallel),
            "sequential" => Ok(ProtocolKind::Sequential),
            other => Err(Error::invalid(
                "protocol",
                format!("expected `sequential` or `parallel`, got `{other}`"),
            )),
        }
    }
}

/// Bookkeeping mode for the sequential engine.
///
/// `PerAttempt` charges the clock step and the held-chain memory penalty on
/// every generation attempt, so fiber loss lengthens the run and dephases the
/// held qubits. `LiteralPseudocode` charges both only on the successful
/// attempt, in which case loss has no effect on either total; it exists for
/// auditing the two readings against each other. The parallel engine is
/// identical in both modes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Accounting {
    #[default]
    PerAttempt,
    LiteralPseudocode,
}

impl Accounting {
    pub fn name(&self) -> &'static str {
        match self {
            Accounting::PerAttempt => "per-attempt",
            Accounting::LiteralPseudocode => "literal-pseudocode",
        }
    }
}

impl fmt::Display for Accounting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Accounting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "per-attempt" => Ok(Accounting::PerAttempt),
            "literal" | "literal-pseudocode" => Ok(Accounting::LiteralPseudocode),
            other => Err(Error::invalid(
                "accounting",
                format!("expected `per-attempt` or `literal-pseudocode`, got `{other}`"),
            )),
        }
    }
}

/// Established/unestablished flags for the chain's `N - 1` links; entry `i`
/// is the link between nodes `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkState {
    links: Vec<bool>,
}

impl LinkState {
    pub fn new(num_links: u32) -> Self {
        LinkState {
            links: vec![false; num_links as usize],
        }
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn get(&self, index: usize) -> bool {
        self.links[index]
    }

    pub fn set(&mut self, index: usize, established: bool) {
        self.links[index] = established;
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.links
    }

    /// True iff every link is established (the protocol termination test).
    pub fn all_swapped(&self) -> bool {
        self.links.iter().all(|&link| link)
    }

    /// Number of maximal contiguous blocks of established links.
    pub fn count_runs_of_true(&self) -> u32 {
        let mut runs = 0;
        let mut in_run = false;
        for &link in &self.links {
            if link && !in_run {
                runs += 1;
            }
            in_run = link;
        }
        runs
    }

    pub fn count_unestablished(&self) -> u32 {
        self.links.iter().filter(|&&link| !link).count() as u32
    }
}

impl From<Vec<bool>> for LinkState {
    fn from(links: Vec<bool>) -> Self {
        LinkState { links }
    }
}

/// Result of one protocol execution, in normalized time units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProtocolOutcome {
    /// Cumulative memory time over all surviving qubits.
    pub memory_time: u64,
    /// Wall-clock duration of the run.
    pub clock_time: u64,
    /// Generation attempts made across the whole trial.
    pub attempts_total: u64,
    /// Parallel rounds executed (0 for the sequential protocol).
    pub rounds: u64,
}

/// Inputs of one protocol execution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub num_links: u32,
    /// Per-attempt generation success probability, in `[0, 1]`.
    pub success_prob: f64,
    pub accounting: Accounting,
    pub attempt_cap: u64,
}

impl ProtocolConfig {
    pub fn new(num_links: u32, success_prob: f64) -> Result<Self> {
        if num_links == 0 {
            return Err(Error::invalid("num_links", "must be at least 1".to_string()));
        }
        if !(0.0..=1.0).contains(&success_prob) {
            return Err(Error::invalid(
                "success_prob",
                format!("must lie in [0, 1] (got {success_prob})"),
            ));
        }
        Ok(ProtocolConfig {
            num_links,
            success_prob,
            accounting: Accounting::default(),
            attempt_cap: DEFAULT_ATTEMPT_CAP,
        })
    }

    pub fn from_params(params: &NetworkParams) -> Result<Self> {
        params.validate()?;
        ProtocolConfig::new(params.num_links(), params.success_prob())
    }

    pub fn with_accounting(mut self, accounting: Accounting) -> Self {
        self.accounting = accounting;
        self
    }

    pub fn with_attempt_cap(mut self, cap: u64) -> Self {
        self.attempt_cap = cap;
        self
    }
}

/// Bernoulli trial: true with probability `p`, consuming exactly one
/// uniform draw.
pub fn random_success(rng: &mut TrialRng, p: f64) -> bool {
    debug_assert!((0.0..=1.0).contains(&p));
    rng.next_uniform() < p
}

/// Sequential distribution: establish links left to right, each retried
/// until it succeeds.
///
/// Per-attempt accounting: every attempt advances the clock by
/// [`CLOCK_STEP`]; once any earlier link is established, the held chain's two
/// end qubits accrue [`MEMORY_PER_HELD_PAIR`] per attempt; a success adds
/// [`MEMORY_PER_SUCCESS`]. Literal accounting moves the clock step and the
/// held-chain penalty inside the success branch (see [`Accounting`]).
pub fn run_sequential(config: &ProtocolConfig, rng: &mut TrialRng) -> Result<ProtocolOutcome> {
    let mut memory_time = 0u64;
    let mut clock_time = 0u64;
    let mut attempts_total = 0u64;

    for link in 0..config.num_links {
        loop {
            if attempts_total >= config.attempt_cap {
                return Err(Error::AttemptCapExceeded {
                    cap: config.attempt_cap,
                });
            }
            attempts_total += 1;
            let success = random_success(rng, config.success_prob);
            match config.accounting {
                Accounting::PerAttempt => {
                    clock_time += CLOCK_STEP;
                    if link > 0 {
                        memory_time += MEMORY_PER_HELD_PAIR;
                    }
                    if success {
                        memory_time += MEMORY_PER_SUCCESS;
                        break;
                    }
                }
                Accounting::LiteralPseudocode => {
                    if success {
                        memory_time += MEMORY_PER_SUCCESS;
                        if link > 0 {
                            memory_time += MEMORY_PER_HELD_PAIR;
                        }
                        clock_time += CLOCK_STEP;
                        break;
                    }
                }
            }
        }
    }

    Ok(ProtocolOutcome {
        memory_time,
        clock_time,
        attempts_total,
        rounds: 0,
    })
}

/// One parallel generation round. Charges [`MEMORY_PER_HELD_PAIR`] for each
/// run of already-established links (counted before this round's attempts),
/// then lets every unestablished link attempt once, adding
/// [`MEMORY_PER_SUCCESS`] per new link. Returns the round's memory time.
pub fn parallel_round(links: &mut LinkState, p: f64, rng: &mut TrialRng) -> u64 {
    debug_assert!(!links.all_swapped());
    let mut round_memory = MEMORY_PER_HELD_PAIR * links.count_runs_of_true() as u64;
    for index in 0..links.len() {
        if !links.get(index) && random_success(rng, p) {
            links.set(index, true);
            round_memory += MEMORY_PER_SUCCESS;
        }
    }
    round_memory
}

/// Parallel distribution: rounds of simultaneous attempts on all
/// unestablished links until every link is up. Each round advances the clock
/// by [`CLOCK_STEP`].
pub fn run_parallel(config: &ProtocolConfig, rng: &mut TrialRng) -> Result<ProtocolOutcome> {
    let mut links = LinkState::new(config.num_links);
    let mut memory_time = 0u64;
    let mut clock_time = 0u64;
    let mut attempts_total = 0u64;
    let mut rounds = 0u64;

    while !links.all_swapped() {
        let pending = links.count_unestablished() as u64;
        if attempts_total + pending > config.attempt_cap {
            return Err(Error::AttemptCapExceeded {
                cap: config.attempt_cap,
            });
        }
        attempts_total += pending;
        memory_time += parallel_round(&mut links, config.success_prob, rng);
        clock_time += CLOCK_STEP;
        rounds += 1;
    }

    Ok(ProtocolOutcome {
        memory_time,
        clock_time,
        attempts_total,
        rounds,
    })
}

pub fn run_protocol(
    config: &ProtocolConfig,
    protocol: ProtocolKind,
    rng: &mut TrialRng,
) -> Result<ProtocolOutcome> {
    match protocol {
        ProtocolKind::Sequential => run_sequential(config, rng),
        ProtocolKind::Parallel => run_parallel(config, rng),
    }
}

/// Run one trial of the chosen protocol and convert its timings to physical
/// units and a fidelity.
pub fn simulate_trial(
    params: &NetworkParams,
    protocol: ProtocolKind,
    accounting: Accounting,
    rng: &mut TrialRng,
) -> Result<FidelityResult> {
    let config = ProtocolConfig::from_params(params)?.with_accounting(accounting);
    let outcome = run_protocol(&config, protocol, rng)?;
    let memory_time_s = normalized_time_to_seconds(outcome.memory_time as f64, params);
    let clock_time_s = normalized_time_to_seconds(outcome.clock_time as f64, params);
    Ok(FidelityResult {
        fidelity: closed_form_fidelity(memory_time_s, params)?,
        memory_time_s,
        clock_time_s,
    })
}
