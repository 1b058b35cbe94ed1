mod common;

use channel_fidelity::chanfid::{
    bound_suite, cf_property_suite, channel_fidelity, choi_state_fidelity, diamond_lower_bound, dilation_fidelity,
    fidelity_to_identity, off_diagonal_fidelity_lb, unitary_pair_fidelity, EstimatorConfig, PropertyInputs, Route,
};
use channel_fidelity::channels::{pauli, tensor};
use channel_fidelity::random::Sampler;
use channel_fidelity::states::{optimal_povm, povm_statistic, state_fidelity, trace_distance, Povm};
use channel_fidelity::{ComplexMatrix, QuantumChannel, QuantumChannel32};
use proptest::prelude::*;

fn quick(seed: u64) -> EstimatorConfig {
    EstimatorConfig {
        restarts: 4,
        steps: 60,
        seed,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn property_suite_on_random_channels(d in 2usize..4, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let ch: Vec<QuantumChannel> = (0..6).map(|_| common::random_channel(d, d, &mut s)).collect();
        let u: ComplexMatrix = s.haar_unitary(d);
        let v: ComplexMatrix = s.haar_unitary(d);
        let inputs = PropertyInputs {
            s: &ch[0],
            t: &ch[1],
            s1: &ch[0],
            s2: &ch[2],
            t1: &ch[3],
            t2: &ch[4],
            r: &ch[5],
            u: &u,
            v: &v,
            lambda: s.uniform_in(0.01, 0.99),
        };
        for check in cf_property_suite(&inputs) {
            prop_assert!(check.passed, "{} failed: {}", check.name, check.detail);
        }
    }

    #[test]
    fn routes_agree(d in 1usize..4, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let a = common::random_channel(d, d, &mut s);
        let b = common::random_channel(d, d, &mut s);
        let r = channel_fidelity(&a, &b).unwrap();
        prop_assert!(r.residual <= 1e-8);
        prop_assert!((0.0..=1.0).contains(&r.value));
        prop_assert!((dilation_fidelity(&a, &b).unwrap() - r.value).abs() <= 1e-8);
        let id = QuantumChannel::identity(d);
        prop_assert!((fidelity_to_identity(&a).unwrap() - choi_state_fidelity(&a, &id).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn rectangular_channels_use_choi_route(d_in in 1usize..4, d_out in 1usize..4, seed in any::<u64>()) {
        prop_assume!(d_in != d_out);
        let mut s = Sampler::new(seed);
        let a = common::random_channel(d_in, d_out, &mut s);
        let b = common::random_channel(d_in, d_out, &mut s);
        let r = channel_fidelity(&a, &b).unwrap();
        prop_assert_eq!(r.route, Route::ChoiState);
        prop_assert!(r.residual <= 1e-8);
    }

    #[test]
    fn unitary_closed_form(d in 1usize..5, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let u: ComplexMatrix = s.haar_unitary(d);
        let v: ComplexMatrix = s.haar_unitary(d);
        let closed = u.adjoint_mul(&v).trace().norm_sqr() / (d * d) as f64;
        let general = choi_state_fidelity(&QuantumChannel::unitary(u.clone()).unwrap(), &QuantumChannel::unitary(v.clone()).unwrap()).unwrap();
        prop_assert!((general - closed).abs() <= 1e-10);
        prop_assert!((unitary_pair_fidelity(&u, &v).unwrap() - closed).abs() <= 1e-14);
    }

    #[test]
    fn povm_statistic_dominates_root_fidelity(d in 2usize..4, outcomes in 2usize..6, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let a = common::random_channel(d, d, &mut s);
        let b = common::random_channel(d, d, &mut s);
        let (rho, sigma) = (a.choi().state().clone(), b.choi().state().clone());
        let root = state_fidelity(&rho, &sigma).unwrap().sqrt();
        let povm = Povm::random(d * d, outcomes, &mut s);
        prop_assert!(povm_statistic(&rho, &sigma, &povm).unwrap() >= root - 1e-10);
        let best = optimal_povm(&rho, &sigma).unwrap();
        prop_assert!((povm_statistic(&rho, &sigma, &best).unwrap() - root).abs() <= 1e-6);
    }

    #[test]
    fn bound_chain_holds(d in 2usize..4, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let a = common::random_channel(d, d, &mut s);
        let b = common::random_channel(d, d, &mut s);
        let r = bound_suite(&a, &b, &quick(seed)).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
        prop_assert!(r.diamond_lb >= trace_distance(a.choi().state(), b.choi().state()).unwrap() - 1e-12);
    }
}

#[test]
fn tensor_fidelity_factorizes() {
    let x = QuantumChannel::unitary(pauli('X')).unwrap();
    let dep = QuantumChannel::depolarizing(2, 0.5).unwrap();
    let id = QuantumChannel::identity(2);
    let joint = channel_fidelity(&tensor(&x, &dep), &tensor(&id, &id)).unwrap().value;
    let product = channel_fidelity(&x, &id).unwrap().value * channel_fidelity(&dep, &id).unwrap().value;
    assert!((joint - product).abs() < 1e-10);
    assert!(joint.abs() < 1e-10);

    let y = QuantumChannel::unitary(channel_fidelity::channels::phase_gate(&[0.0, 1.0])).unwrap();
    let joint = choi_state_fidelity(&tensor(&y, &dep), &tensor(&id, &id)).unwrap();
    let expected = 0.5f64.cos().powi(2) * (1.0 - 0.5 + 0.5 / 4.0);
    assert!((joint - expected).abs() < 1e-10);
}

#[test]
fn depolarizing_closed_form() {
    for d in 2..5 {
        for p in [0.0, 0.3, 0.8, 1.0] {
            let dep = QuantumChannel::depolarizing(d, p).unwrap();
            let expected = 1.0 - p + p / (d * d) as f64;
            let general = choi_state_fidelity(&dep, &QuantumChannel::identity(d)).unwrap();
            assert!((general - expected).abs() < 1e-10, "d={d} p={p}");
        }
    }
}

#[test]
fn diamond_bound_against_depolarizer() {
    let id = QuantumChannel::identity(2);
    for p in [0.05, 0.4, 0.9] {
        let dep = QuantumChannel::depolarizing(2, p).unwrap();
        let lb = diamond_lower_bound(&dep, &id, &quick(1)).unwrap();
        let choi = trace_distance(dep.choi().state(), id.choi().state()).unwrap();
        assert!((choi - 1.5 * p).abs() < 1e-12);
        assert!(lb >= choi - 1e-12 && lb <= 2.0);
        assert!(off_diagonal_fidelity_lb(&dep, &quick(1)).unwrap() >= 1.0 - p / 2.0 - 1e-12);
    }
}

#[test]
fn estimators_are_reproducible() {
    let a = QuantumChannel::random(3, 3, 2, 10).unwrap();
    let b = QuantumChannel::random(3, 3, 5, 11).unwrap();
    let x = diamond_lower_bound(&a, &b, &quick(9)).unwrap();
    let y = diamond_lower_bound(&a, &b, &quick(9)).unwrap();
    assert_eq!(x.to_bits(), y.to_bits());
}

#[test]
fn f32_fidelity_tracks_f64() {
    let a32 = QuantumChannel32::random(2, 2, 2, 4).unwrap();
    let b32 = QuantumChannel32::random(2, 2, 3, 5).unwrap();
    let a = QuantumChannel::random(2, 2, 2, 4).unwrap();
    let b = QuantumChannel::random(2, 2, 3, 5).unwrap();
    let f32v = choi_state_fidelity(&a32, &b32).unwrap();
    let f64v = choi_state_fidelity(&a, &b).unwrap();
    assert!((f64::from(f32v) - f64v).abs() < 1e-4);
}
