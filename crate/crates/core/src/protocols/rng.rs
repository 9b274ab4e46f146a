use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic random stream for one simulation trial.
///
/// Backed by ChaCha8, so identical seeds produce identical draws on every
/// platform. Per-trial streams are derived from a master seed by a
/// counter-based split ([`TrialRng::derive`]), which makes trial `i`
/// reproducible no matter how trials are scheduled across workers.
#[derive(Debug, Clone)]
pub struct TrialRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl TrialRng {
    pub fn new(seed: u64) -> Self {
        TrialRng {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Derive an independent stream from a master seed and a list of
    /// counters (e.g. `[cell_index, trial_index]`).
    pub fn derive(master_seed: u64, counters: &[u64]) -> Self {
        let mut state = mix64(master_seed);
        for &counter in counters {
            state = mix64(state ^ mix64(counter));
        }
        TrialRng::new(state)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// One uniform draw in `[0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }
}

/// SplitMix64 finalizer; full-period bijective mixing on u64.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
