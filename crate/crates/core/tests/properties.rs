//! Property-based invariants, driven by seeded samplers so every failure is
//! reproducible from the printed seed.

use proptest::prelude::*;
use quncert_core::hilbert::random::{
    derived_stream, haar_random_ket, random_hermitian, random_observable,
};
use quncert_core::hilbert::{
    Operator, commutator, partial_trace_ancilla, tensor,
};
use quncert_core::measurement::{JointFamily, MeasurementFamily};
use quncert_core::{metrics, relations};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn commutator_of_hermitians_is_antihermitian(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = derived_stream(seed, 0);
        let a = random_hermitian(dim, &mut rng);
        let b = random_hermitian(dim, &mut rng);
        let c = commutator(&a, &b).unwrap();
        prop_assert!((&c + &c.adjoint()).operator_norm() <= 1e-10);
    }

    #[test]
    fn partial_trace_of_product_scales_by_trace(seed in any::<u64>(), dh in 2usize..=4, dk in 2usize..=4) {
        let mut rng = derived_stream(seed, 1);
        let a = random_hermitian(dh, &mut rng);
        let r = random_hermitian(dk, &mut rng);
        let out = partial_trace_ancilla(&tensor(&a, &r), dk).unwrap();
        let expected = a.scale_re(r.trace().re);
        prop_assert!(out.distance(&expected) <= 1e-10);
    }

    #[test]
    fn spectral_reconstruction_across_dims(seed in any::<u64>(), dim in 2usize..=8) {
        let mut rng = derived_stream(seed, 2);
        let a = random_hermitian(dim, &mut rng);
        let obs = quncert_core::hilbert::Observable::from_operator(a.clone()).unwrap();
        prop_assert!(obs.reconstruct().distance(&a) <= 1e-9);
    }

    #[test]
    fn operator_norm_submultiplicative(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = derived_stream(seed, 3);
        let a = random_hermitian(dim, &mut rng);
        let b = random_hermitian(dim, &mut rng);
        prop_assert!((&a * &b).operator_norm() <= a.operator_norm() * b.operator_norm() + 1e-9);
    }

    #[test]
    fn family_probabilities_are_additive_and_consistent(seed in any::<u64>(), dim in 2usize..=5, k in 1usize..=6) {
        let mut rng = derived_stream(seed, 4);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let rho = quncert_core::hilbert::random::random_density(dim, &mut rng);
        let pom = f.pom();
        let mut total = 0.0;
        for m in f.labels() {
            let p = f.outcome_probability(&[m], &rho).unwrap();
            prop_assert!((p - pom.probability(m, &rho).unwrap()).abs() <= 1e-10);
            total += p;
        }
        prop_assert!((total - 1.0).abs() <= 1e-9);
        let labels: Vec<f64> = f.labels().collect();
        prop_assert!((f.outcome_probability(&labels, &rho).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn nonselective_reduction_is_the_channel(seed in any::<u64>(), dim in 2usize..=5, k in 2usize..=5) {
        let mut rng = derived_stream(seed, 5);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let rho = quncert_core::hilbert::random::random_density(dim, &mut rng);
        let labels: Vec<f64> = f.labels().collect();
        let via_post = f.post_state(&labels, &rho).unwrap();
        let via_channel = f.tpcp_map().apply(rho.op()).unwrap();
        prop_assert!(via_post.op().distance(&via_channel) <= 1e-10);
    }

    #[test]
    fn dual_map_is_unital(seed in any::<u64>(), dim in 2usize..=5, k in 1usize..=5) {
        let mut rng = derived_stream(seed, 6);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let out = f.tpcp_map().apply_dual(&Operator::identity(dim)).unwrap();
        prop_assert!(out.distance(&Operator::identity(dim)) <= 1e-10);
    }

    #[test]
    fn noise_routes_agree_and_disturbance_is_bounded(seed in any::<u64>(), dim in 2usize..=5, k in 1usize..=5) {
        let mut rng = derived_stream(seed, 7);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let a = random_observable(dim, &mut rng);
        let b = random_hermitian(dim, &mut rng);
        let psi = haar_random_ket(dim, &mut rng);
        let eps = metrics::epsilon(&f, &a, &psi).unwrap();
        let eps_pom = metrics::epsilon_from_pom(&f.pom(), &a, &psi).unwrap();
        prop_assert!(eps >= 0.0);
        prop_assert!((eps - eps_pom).abs() <= 1e-9);
        let eta = metrics::eta(&f, &b, &psi).unwrap();
        prop_assert!(eta >= 0.0);
        prop_assert!(eta <= 2.0 * b.operator_norm() + 1e-9);
    }

    #[test]
    fn projective_families_are_noiseless(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = derived_stream(seed, 8);
        let a = random_observable(dim, &mut rng);
        let f = MeasurementFamily::projective(&a);
        let psi = haar_random_ket(dim, &mut rng);
        prop_assert!(metrics::epsilon(&f, &a, &psi).unwrap() <= 1e-10);
    }

    #[test]
    fn mean_operators_are_hermitian(seed in any::<u64>(), dim in 2usize..=5, k in 1usize..=5) {
        let mut rng = derived_stream(seed, 9);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let a = random_observable(dim, &mut rng);
        let b = random_hermitian(dim, &mut rng);
        prop_assert!(metrics::mean_noise_operator(&f, &a).unwrap().hermitian_deviation() <= 1e-10);
        prop_assert!(metrics::mean_disturbance_operator(&f, &b).unwrap().hermitian_deviation() <= 1e-10);
    }

    #[test]
    fn guaranteed_relations_hold(seed in any::<u64>(), dim in 2usize..=6, k in 1usize..=6) {
        let mut rng = derived_stream(seed, 10);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let a = random_observable(dim, &mut rng);
        let b = random_observable(dim, &mut rng);
        let psi = haar_random_ket(dim, &mut rng);
        prop_assert!(relations::robertson(&a, &b, &psi).unwrap().pass);
        prop_assert!(relations::universal(&f, &a, &b, &psi).unwrap().pass);
        prop_assert!(relations::corrected_noise_disturbance(&f, &a, &b, &psi).unwrap().pass);
        prop_assert!(relations::disturbance_bound(&f, b.op(), &psi).unwrap().pass);
    }

    #[test]
    fn projective_measurements_break_heisenberg_product(seed in any::<u64>(), dim in 2usize..=5) {
        // ε(A) = 0 for the projective family, so the product fails whenever
        // the commutator bound is appreciable.
        let mut rng = derived_stream(seed, 11);
        let a = random_observable(dim, &mut rng);
        let b = random_observable(dim, &mut rng);
        let psi = haar_random_ket(dim, &mut rng);
        let f = MeasurementFamily::projective(&a);
        let r = relations::heisenberg_nd(&f, &a, &b, &psi).unwrap();
        if r.rhs > 1e-9 {
            prop_assert!(!r.pass, "margin {} with rhs {}", r.margin, r.rhs);
        }
    }

    #[test]
    fn dimensionless_form_matches_universal_verdict(seed in any::<u64>(), dim in 2usize..=5) {
        let mut rng = derived_stream(seed, 12);
        let f = MeasurementFamily::random(dim, 3, &mut rng);
        let a = random_observable(dim, &mut rng);
        let b = random_observable(dim, &mut rng);
        let psi = haar_random_ket(dim, &mut rng);
        let u = relations::universal(&f, &a, &b, &psi).unwrap();
        match relations::universal_dimensionless(&f, &a, &b, &psi) {
            Ok(d) => prop_assert_eq!(u.pass, d.pass),
            Err(quncert_core::Error::DegenerateSigma { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
        }
    }

    #[test]
    fn joint_marginals_are_poms(seed in any::<u64>(), dim in 2usize..=4, ka in 1usize..=3, kb in 1usize..=3) {
        let mut rng = derived_stream(seed, 13);
        let j = JointFamily::random(dim, ka, kb, &mut rng);
        let (ma, mb) = j.marginals();
        for pom in [ma, mb] {
            let mut sum = Operator::zeros(dim);
            for (_, e) in pom.effects() {
                sum = &sum + e;
            }
            prop_assert!(sum.distance(&Operator::identity(dim)) <= 1e-10);
        }
    }

    #[test]
    fn family_wire_roundtrip_is_lossless(seed in any::<u64>(), dim in 2usize..=4, k in 1usize..=4) {
        let mut rng = derived_stream(seed, 14);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let json = serde_json::to_string(&f).unwrap();
        let back: MeasurementFamily = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(f, back);
    }
}
