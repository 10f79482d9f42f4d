//! Randomised invariants across the numerics, channel, measure, SDP and
//! discrimination layers.

use proptest::prelude::*;

use dyncoh::channels::random::{gaussian_matrix, random_channel, random_density, random_mixed_unitary, random_unitary, rng};
use dyncoh::channels::{
    choi_to_kraus, compose, kraus_to_choi, mixture, tensor, validate, DensityMatrix, KrausChannel,
};
use dyncoh::discrimination::{optimal_setup, simulate};
use dyncoh::measures::{
    channel_divergence, delta_c_max, t2_closed_form, t_diamond, t_one, OptimizerConfig,
};
use dyncoh::numerics::{hermitian_eig, kron, partial_trace, trace_norm, ComplexMatrix, Subsystem};
use dyncoh::sdp::{build_diamond_norm, build_diamond_unital, names, solve, verify, SdpStatus};
use dyncoh::static_coherence::{c2, c_re, is_majorized_by, relative_entropy, StaticMeasureId};

fn matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    gaussian_matrix(rows, cols, &mut rng(seed))
}

fn hermitian(n: usize, seed: u64) -> ComplexMatrix {
    matrix(n, n, seed).hermitian_part()
}

fn conjugated(u: &ComplexMatrix, rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::new(u.conjugate(rho.matrix()).hermitian_part()).unwrap()
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn kron_is_associative(seed in any::<u64>(), a in 1usize..4, b in 1usize..4, c in 1usize..3) {
        let (x, y, z) = (matrix(a, b, seed), matrix(b, c, seed ^ 1), matrix(c, a, seed ^ 2));
        let left = kron(&kron(&x, &y), &z);
        let right = kron(&x, &kron(&y, &z));
        prop_assert!(left.distance(&right) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let (a, b) = (matrix(da, da, seed), matrix(db, db, seed ^ 7));
        let ab = kron(&a, &b);
        let tb = partial_trace(&ab, da, db, Subsystem::B).unwrap();
        let ta = partial_trace(&ab, da, db, Subsystem::A).unwrap();
        prop_assert!(tb.distance(&a.scale_c(b.trace())) < 1e-12);
        prop_assert!(ta.distance(&b.scale_c(a.trace())) < 1e-12);
    }

    #[test]
    fn trace_norm_bounds_trace(seed in any::<u64>(), n in 1usize..7) {
        let h = hermitian(n, seed);
        prop_assert!(trace_norm(&h) >= h.trace().norm() - 1e-12);
    }

    #[test]
    fn eig_reconstructs(seed in any::<u64>(), n in 1usize..9) {
        let h = hermitian(n, seed);
        let e = hermitian_eig(&h).unwrap();
        prop_assert!(e.reconstruct().distance(&h) <= 1e-9);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn choi_round_trip(seed in any::<u64>(), din in 2usize..4, dout in 2usize..4, rank in 1usize..5) {
        prop_assume!(rank * dout >= din);
        let ch = random_channel(din, dout, rank, seed).unwrap();
        let j = kraus_to_choi(&ch);
        let back = kraus_to_choi(&choi_to_kraus(&j).unwrap());
        prop_assert!(back.matrix().distance(j.matrix()) < 1e-7);
    }

    #[test]
    fn bloch_action_matches_kraus(seed in any::<u64>(), rank in 1usize..5) {
        let ch = random_channel(2, 2, rank, seed).unwrap();
        let rho = random_density(2, seed ^ 3).unwrap();
        let b = ch.bloch_affine().unwrap();
        let out = ch.apply(&rho).unwrap().bloch_vector().unwrap();
        prop_assert!((b.apply(&rho.bloch_vector().unwrap()) - out).norm() < 1e-9);
    }

    #[test]
    fn unital_outputs_are_majorized(seed in any::<u64>(), d in 2usize..5, terms in 1usize..5) {
        let mu = random_mixed_unitary(d, terms, seed);
        let rho = random_density(d, seed ^ 5).unwrap();
        let out = mu.apply(&rho).unwrap();
        prop_assert!(is_majorized_by(&out, &rho, 1e-9));
        prop_assert!(c_re(&out) <= c_re(&rho) + 1e-9);
        prop_assert!(c2(&out) <= c2(&rho) + 1e-9);
    }

    #[test]
    fn compose_and_tensor_stay_cptp(seed in any::<u64>()) {
        let a = random_channel(2, 2, 2, seed).unwrap();
        let b = random_channel(2, 2, 3, seed ^ 9).unwrap();
        prop_assert!(validate(compose(&a, &b).unwrap().kraus()).unwrap().is_cptp);
        prop_assert!(validate(tensor(&a, &b).unwrap().kraus()).unwrap().is_cptp);
    }

    #[test]
    fn static_measures_are_unitarily_invariant(seed in any::<u64>(), d in 2usize..5) {
        let rho = random_density(d, seed).unwrap();
        let v = conjugated(&random_unitary(d, seed ^ 11), &rho);
        prop_assert!((c2(&v) - c2(&rho)).abs() < 1e-10);
        prop_assert!((c_re(&v) - c_re(&rho)).abs() < 1e-10);
    }

    #[test]
    fn relative_entropy_is_nonnegative(seed in any::<u64>(), d in 2usize..5) {
        let rho = random_density(d, seed).unwrap();
        let sigma = random_density(d, seed ^ 13).unwrap();
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-10);
        prop_assert!(relative_entropy(&rho, &rho).unwrap() < 1e-6);
    }

    #[test]
    fn t2_unitary_bracketing(seed in any::<u64>(), rank in 2usize..5) {
        let ch = random_channel(2, 2, rank, seed).unwrap();
        let u = KrausChannel::unitary(random_unitary(2, seed ^ 17)).unwrap();
        let v = KrausChannel::unitary(random_unitary(2, seed ^ 19)).unwrap();
        let bracketed = compose(&u, &compose(&ch, &v).unwrap()).unwrap();
        let (a, b) = (t2_closed_form(&ch).unwrap().value, t2_closed_form(&bracketed).unwrap().value);
        prop_assert!((a - b).abs() < 1e-8, "{a} {b}");
    }

    #[test]
    fn t2_convex_and_monotone(seed in any::<u64>(), p in 0.0f64..1.0) {
        let a = random_channel(2, 2, 2, seed).unwrap();
        let b = random_channel(2, 2, 3, seed ^ 23).unwrap();
        let mix = t2_closed_form(&mixture(p, &a, &b).unwrap()).unwrap().value;
        let bound = p * t2_closed_form(&a).unwrap().value + (1.0 - p) * t2_closed_form(&b).unwrap().value;
        prop_assert!(mix <= bound + 1e-6);
        let post = random_mixed_unitary(2, 3, seed ^ 29);
        let processed = t2_closed_form(&compose(&post, &a).unwrap()).unwrap().value;
        prop_assert!(processed <= t2_closed_form(&a).unwrap().value + 1e-6);
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn closed_form_matches_numeric_search(seed in any::<u64>(), rank in 1usize..5) {
        let ch = random_channel(2, 2, rank, seed).unwrap();
        let exact = t2_closed_form(&ch).unwrap().value;
        let numeric = delta_c_max(&ch, StaticMeasureId::C2, &OptimizerConfig::default()).unwrap().value;
        prop_assert!((exact - numeric).abs() <= 1e-4, "{exact} {numeric}");
    }

    #[test]
    fn diamond_dual_certificate(seed in any::<u64>(), rank in 2usize..5) {
        let ch = random_channel(2, 2, rank, seed).unwrap();
        let p = build_diamond_unital(&ch.choi()).unwrap();
        let sol = solve(&p, 1e-8, 200).unwrap();
        prop_assert_eq!(sol.status, SdpStatus::Optimal);
        for it in &sol.history {
            prop_assert!(it.dual_objective <= it.primal_objective + 1e-9);
        }
        // 0 ⪯ X ⪯ 2ρ⊗I with tr ρ = 1
        let x = sol.multiplier(names::SLACK_CHOI);
        let rho = sol.multiplier(names::SLACK_NORM);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-7);
        prop_assert!(hermitian_eig(x).unwrap().min() >= -1e-7);
        let upper = &kron(rho, &ComplexMatrix::identity(2)).scale(2.0) - x;
        prop_assert!(hermitian_eig(&upper.hermitian_part()).unwrap().min() >= -1e-7);
        // objective equals 2 λmax(Tr_B Z)
        let trz = partial_trace(sol.block(names::Z), 2, 2, Subsystem::B).unwrap();
        let lmax = hermitian_eig(&trz.hermitian_part()).unwrap().max();
        prop_assert!((sol.primal_objective - 2.0 * lmax).abs() < 1e-6);
        // gap identity
        let check = verify(&p, &sol).unwrap();
        prop_assert!(check.max_residual() <= 1e-6);
        prop_assert!((check.gap - (sol.primal_objective - sol.dual_objective)).abs() < 1e-12);
    }

    #[test]
    fn diamond_norm_scales_linearly(seed in any::<u64>(), c in 0.1f64..10.0) {
        let a = random_channel(2, 2, 2, seed).unwrap();
        let b = random_channel(2, 2, 3, seed ^ 31).unwrap();
        let delta = a.choi().matrix() - b.choi().matrix();
        let base = solve(&build_diamond_norm(&delta, 2, 2).unwrap(), 1e-9, 200).unwrap();
        let scaled = solve(&build_diamond_norm(&delta.scale(c), 2, 2).unwrap(), 1e-9, 200).unwrap();
        prop_assert!((scaled.primal_objective - c * base.primal_objective).abs() < 1e-6 * c.max(1.0));
    }

    #[test]
    fn verify_detects_perturbation(seed in any::<u64>()) {
        let ch = random_channel(2, 2, 2, seed).unwrap();
        let p = build_diamond_unital(&ch.choi()).unwrap();
        let mut sol = solve(&p, 1e-8, 200).unwrap();
        let w = sol.primal_blocks.get_mut(names::W).unwrap();
        w[(0, 0)] += dyncoh::numerics::c(1e-2, 0.0);
        prop_assert!(verify(&p, &sol).unwrap().max_primal() > 1e-3);
    }

    #[test]
    fn t_diamond_unitary_invariance(seed in any::<u64>(), rank in 2usize..5) {
        let ch = random_channel(2, 2, rank, seed).unwrap();
        let u = KrausChannel::unitary(random_unitary(2, seed ^ 37)).unwrap();
        let a = t_diamond(&ch).unwrap().value;
        let b = t_diamond(&compose(&u, &ch).unwrap()).unwrap().value;
        prop_assert!((a - b).abs() < 1e-5);
        prop_assert!(a <= 2.0 + 1e-6);
    }
}

proptest! {
    #![proptest_config(cases(6))]

    #[test]
    fn t_one_below_t_diamond(seed in any::<u64>(), rank in 2usize..5) {
        let ch = random_channel(2, 2, rank, seed).unwrap();
        let t1 = t_one(&ch, &OptimizerConfig::default()).unwrap().value;
        let td = t_diamond(&ch).unwrap().value;
        prop_assert!(t1 <= td + 1e-4, "{t1} {td}");
    }

    #[test]
    fn divergence_data_processing(seed in any::<u64>()) {
        let cfg = OptimizerConfig::default();
        let n = random_channel(2, 2, 2, seed).unwrap();
        let m = random_channel(2, 2, 4, seed ^ 41).unwrap();
        let phi = random_mixed_unitary(2, 2, seed ^ 43);
        let before = channel_divergence(&n, &m, &cfg).unwrap();
        let after = channel_divergence(&compose(&phi, &n).unwrap(), &compose(&phi, &m).unwrap(), &cfg).unwrap();
        prop_assert!(after <= before + 2e-3, "{after} {before}");
    }
}

/// Outcome frequencies of a fixed setup converge at the binomial rate.
#[test]
fn born_rule_sanity() {
    let a = random_channel(2, 2, 2, 5).unwrap();
    let b = random_channel(2, 2, 3, 6).unwrap();
    let setup = optimal_setup(&a, &b).unwrap();
    for shots in [1_000u64, 100_000] {
        let s = simulate(&a, &b, &setup, shots, 77).unwrap();
        let sd = (setup.predicted_success * (1.0 - setup.predicted_success) / shots as f64).sqrt();
        assert!((s.empirical - setup.predicted_success).abs() <= 4.0 * sd, "{shots}");
    }
}

/// Simulated success never beats the diamond-distance bound against the nearest unital channel.
#[test]
fn success_respects_diamond_bound() {
    for eta in [0.3, 0.6, 0.9] {
        let ch = dyncoh::channels::amplitude_damping(eta).unwrap();
        let td = t_diamond(&ch).unwrap();
        let w = td.witness_channel.clone().unwrap();
        let setup = optimal_setup(&ch, &w).unwrap();
        let s = simulate(&ch, &w, &setup, 100_000, 99).unwrap();
        assert!(s.empirical <= 0.5 + 0.25 * td.value + 5.0 * s.stderr);
    }
}
