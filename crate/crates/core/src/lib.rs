//! Monte Carlo simulation of asynchronous Bell-pair distribution over linear
//! repeater chains.
//!
//! The crate has four layers:
//!
//! - [`model`]: closed-form physics — fiber loss, memory dephasing, the
//!   end-to-end fidelity law, and the hashing distillation metrics.
//! - [`protocols`]: deterministic, seedable Monte Carlo engines for the
//!   sequential and parallel distribution protocols, working in normalized
//!   time units.
//! - [`oracle`]: an exact density-matrix/statevector engine that re-derives
//!   the closed forms from the channel definitions, plus analytic
//!   expectations for the protocol engines and a named validation suite.
//! - [`experiments`]: the parameter-sweep harness with reproducible seeding
//!   and CSV/JSON output.

pub mod error;
pub mod experiments;
pub mod model;
pub mod oracle;
pub mod protocols;

pub use error::{Error, Result};
pub use experiments::{run_sweep, CellStats, SweepSpec};
pub use model::{FidelityResult, NetworkParams};
pub use protocols::{simulate_trial, Accounting, ProtocolKind, TrialRng};
