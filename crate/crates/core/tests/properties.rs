//! Property tests for the model invariants and the exact engine.

use bellchain::model::{
    alpha_beta, closed_form_fidelity, compose_alpha_beta, dephase_prob, hashing_yield,
    NetworkParams,
};
use bellchain::oracle::{oracle_fidelity, DensityMatrix};
use bellchain::protocols::{
    parallel_round, run_parallel, run_sequential, Accounting, LinkState, ProtocolConfig,
    ProtocolKind, TrialRng,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Distillation threshold frozen from the bisection oracle in the model tests.
const YIELD_THRESHOLD: f64 = 0.8107103750847682;

proptest! {
    #[test]
    fn alpha_beta_always_sums_to_one(p_x in 0.0..=0.5f64, p_y in 0.0..=0.5f64) {
        let (alpha, beta) = alpha_beta(p_x, p_y).unwrap();
        prop_assert_eq!(alpha + beta, 1.0);
        prop_assert!((0.0..=1.0).contains(&alpha));
        prop_assert!((0.0..=1.0).contains(&beta));
    }

    #[test]
    fn pairwise_composition_equals_total_time_law(
        times in prop::array::uniform6(0.0..0.05f64),
    ) {
        let t_dp = 0.01;
        let pair = |a: f64, b: f64| alpha_beta(
            dephase_prob(a, t_dp).unwrap(),
            dephase_prob(b, t_dp).unwrap(),
        ).unwrap();
        let merged = compose_alpha_beta(pair(times[0], times[1]), pair(times[2], times[3]));
        let full = compose_alpha_beta(merged, pair(times[4], times[5]));
        let total: f64 = times.iter().sum();
        let expected = 0.5 * (1.0 + (-total / t_dp).exp());
        prop_assert!((full.0 - expected).abs() < 1e-12);

        // the merged pair alone obeys the four-qubit law
        let four: f64 = times[..4].iter().sum();
        prop_assert!((merged.0 - 0.5 * (1.0 + (-four / t_dp).exp())).abs() < 1e-12);
    }

    #[test]
    fn hashing_yield_zero_below_threshold_increasing_above(
        below in 0.0..YIELD_THRESHOLD,
        lo in 0.0..1.0f64,
        hi in 0.0..1.0f64,
    ) {
        prop_assert_eq!(hashing_yield(below).unwrap(), 0.0);

        let span = YIELD_THRESHOLD + 1e-9;
        let mut a = span + (1.0 - span) * lo.min(hi);
        let mut b = span + (1.0 - span) * lo.max(hi);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if b - a > 1e-12 {
            prop_assert!(hashing_yield(a).unwrap() < hashing_yield(b).unwrap());
        }
    }

    #[test]
    fn count_runs_matches_split_reference(links in prop::collection::vec(any::<bool>(), 1..40)) {
        let reference = links
            .split(|&b| !b)
            .filter(|run| !run.is_empty())
            .count() as u32;
        prop_assert_eq!(LinkState::from(links).count_runs_of_true(), reference);
    }

    #[test]
    fn parallel_round_accounting_is_exact(
        links in prop::collection::vec(any::<bool>(), 1..30),
        seed in any::<u64>(),
        p in 0.0..=1.0f64,
    ) {
        prop_assume!(links.iter().any(|&b| !b));
        let mut state = LinkState::from(links.clone());
        let runs_before = state.count_runs_of_true() as u64;
        let established_before = links.iter().filter(|&&b| b).count();
        let mut rng = TrialRng::new(seed);
        let round_memory = parallel_round(&mut state, p, &mut rng);
        let new_links = state.as_slice().iter().filter(|&&b| b).count() - established_before;
        prop_assert_eq!(round_memory, 4 * runs_before + 3 * new_links as u64);
        // established links never revert
        for (before, after) in links.iter().zip(state.as_slice()) {
            prop_assert!(!before || *after);
        }
    }

    #[test]
    fn protocol_outcomes_deterministic_and_bounded(
        seed in any::<u64>(),
        num_links in 1u32..12,
        p in 0.05..=1.0f64,
    ) {
        let config = ProtocolConfig::new(num_links, p).unwrap();
        for run in [run_sequential, run_parallel] {
            let a = run(&config, &mut TrialRng::new(seed)).unwrap();
            let b = run(&config, &mut TrialRng::new(seed)).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!(a.memory_time >= 3 * num_links as u64);
            prop_assert!(a.attempts_total >= num_links as u64);
        }
    }

    #[test]
    fn trial_fidelity_stays_in_band(
        seed in any::<u64>(),
        num_nodes in 2u32..10,
        lambda in 0.5..=1.0f64,
    ) {
        let params = NetworkParams::new(num_nodes, 50.0, 1e-2)
            .unwrap()
            .with_bsm_ideality(lambda)
            .unwrap();
        let band = lambda.powi(params.num_swaps() as i32);
        for protocol in [ProtocolKind::Sequential, ProtocolKind::Parallel] {
            let result = bellchain::simulate_trial(
                &params,
                protocol,
                Accounting::PerAttempt,
                &mut TrialRng::new(seed),
            )
            .unwrap();
            prop_assert!(result.fidelity <= band + 1e-15);
            prop_assert!(result.fidelity >= band / 2.0 - 1e-15);
            let expected = closed_form_fidelity(result.memory_time_s, &params).unwrap();
            prop_assert_eq!(result.fidelity, expected);
        }
    }
}

/// Real symmetric embedding of a complex Hermitian matrix; eigenvalues match
/// (each doubled in multiplicity).
fn min_eigenvalue(dm: &DensityMatrix) -> f64 {
    let d = dm.dim();
    let mut embedded = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for row in 0..d {
        for col in 0..d {
            let z = dm.get(row, col);
            embedded[(row, col)] = z.re;
            embedded[(d + row, d + col)] = z.re;
            embedded[(d + row, col)] = z.im;
            embedded[(row, d + col)] = -z.im;
        }
    }
    embedded
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_states_stay_physical(
        times in prop::array::uniform6(0.0..0.05f64),
        lambdas in prop::array::uniform2(0.7..=1.0f64),
    ) {
        let t_dp = 0.01;
        let mut state = DensityMatrix::bell_pair()
            .tensor(&DensityMatrix::bell_pair())
            .tensor(&DensityMatrix::bell_pair());
        for (qubit, &t) in times.iter().enumerate() {
            state.apply_dephasing(qubit, t, t_dp).unwrap();
        }
        state.apply_depolarizing_2q((1, 2), lambdas[0]).unwrap();
        prop_assert!((state.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(state.hermiticity_violation() < 1e-12);
        prop_assert!(min_eigenvalue(&state) >= -1e-10);

        let mut state = state.bsm_project((1, 2)).unwrap();
        state.apply_depolarizing_2q((1, 2), lambdas[1]).unwrap();
        let state = state.bsm_project((1, 2)).unwrap();
        prop_assert!((state.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(min_eigenvalue(&state) >= -1e-10);
    }

    #[test]
    fn oracle_agrees_with_closed_form(
        times in prop::array::uniform6(0.0..0.03f64),
        lambda in 0.9..=1.0f64,
    ) {
        let t_dp = 0.01;
        let exact = oracle_fidelity(&times, &[lambda, lambda], t_dp).unwrap();
        let params = NetworkParams::new(4, 50.0, t_dp)
            .unwrap()
            .with_bsm_ideality(lambda)
            .unwrap();
        let closed = closed_form_fidelity(times.iter().sum(), &params).unwrap();
        prop_assert!((exact - closed).abs() < 1e-10);
    }
}
