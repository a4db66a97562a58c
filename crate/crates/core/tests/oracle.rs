//! Cross-formalism agreement: the dilated ancilla model recomputes every
//! statistical quantity of a family and must agree with the Kraus-side
//! formulas to tight absolute tolerance.

use quncert_core::dilation::{
    dilate, dilate_with_completion_permutation, model_epsilon, model_eta,
    model_outcome_probability, verify_realization,
};
use quncert_core::hilbert::random::{
    derived_stream, haar_random_ket, random_density, random_hermitian, random_observable,
};
use quncert_core::measurement::MeasurementFamily;
use quncert_core::metrics;
use rand::Rng;

#[test]
fn model_and_kraus_metrics_agree_across_dims() {
    let mut rng = derived_stream(900, 0);
    for trial in 0..60 {
        let dim = rng.random_range(2..=5);
        let k = rng.random_range(1..=6);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let p = dilate(&f);
        let a = random_observable(dim, &mut rng);
        let b = random_hermitian(dim, &mut rng);
        let psi = haar_random_ket(dim, &mut rng);

        let eps = metrics::epsilon(&f, &a, &psi).unwrap();
        let eps_model = model_epsilon(&p, &a, &psi).unwrap();
        let eps_pom = metrics::epsilon_from_pom(&f.pom(), &a, &psi).unwrap();
        assert!(
            (eps - eps_model).abs() <= 1e-9,
            "trial {trial}: epsilon {eps} vs model {eps_model}"
        );
        assert!(
            (eps - eps_pom).abs() <= 1e-9,
            "trial {trial}: epsilon {eps} vs pom {eps_pom}"
        );

        let eta = metrics::eta(&f, &b, &psi).unwrap();
        let eta_model = model_eta(&p, &b, &psi).unwrap();
        assert!(
            (eta - eta_model).abs() <= 1e-9,
            "trial {trial}: eta {eta} vs model {eta_model}"
        );
    }
}

#[test]
fn permuted_completion_changes_nothing_observable() {
    let mut rng = derived_stream(900, 1);
    for _ in 0..20 {
        let dim = rng.random_range(2..=4);
        let k = rng.random_range(2..=4);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let p = dilate(&f);
        let size = dim * k - dim;
        let mut perm: Vec<usize> = (0..size).collect();
        // deterministic shuffle from the stream
        for i in (1..size).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let q = dilate_with_completion_permutation(&f, Some(&perm)).unwrap();

        assert!(verify_realization(&q, &f).unwrap() <= 1e-9);
        let a = random_observable(dim, &mut rng);
        let b = random_hermitian(dim, &mut rng);
        let psi = haar_random_ket(dim, &mut rng);
        assert!(
            (model_epsilon(&p, &a, &psi).unwrap() - model_epsilon(&q, &a, &psi).unwrap()).abs()
                <= 1e-9
        );
        assert!(
            (model_eta(&p, &b, &psi).unwrap() - model_eta(&q, &b, &psi).unwrap()).abs() <= 1e-9
        );
    }
}

#[test]
fn realization_residuals_small_for_random_families() {
    let mut rng = derived_stream(900, 2);
    for _ in 0..30 {
        let dim = rng.random_range(2..=5);
        let k = rng.random_range(1..=6);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let p = dilate(&f);
        let r = verify_realization(&p, &f).unwrap();
        assert!(r <= 1e-9, "residual {r} at dim {dim} k {k}");
    }
}

#[test]
fn born_rule_agrees_through_the_model() {
    let mut rng = derived_stream(900, 3);
    for _ in 0..20 {
        let dim = rng.random_range(2..=4);
        let k = rng.random_range(1..=5);
        let f = MeasurementFamily::random(dim, k, &mut rng);
        let p = dilate(&f);
        let rho = random_density(dim, &mut rng);
        for m in f.labels() {
            let kraus = f.outcome_probability(&[m], &rho).unwrap();
            let model = model_outcome_probability(&p, m, &rho).unwrap();
            assert!((kraus - model).abs() <= 1e-10);
        }
    }
}

#[test]
fn conditional_heisenberg_criterion_is_sufficient() {
    // Families whose criterion residual vanishes must satisfy the
    // Heisenberg-type product on every sampled state.
    use ndarray::Array2;
    use quncert_core::hilbert::{C64, Observable, Operator};

    let mut rng = derived_stream(900, 4);

    // diagonal family with diagonal observables: everything commutes
    let dim = 3;
    let mut diag_ops = Vec::new();
    let weights = [0.2, 0.3, 0.5];
    for (i, w) in weights.iter().enumerate() {
        let mut m = Array2::<C64>::zeros((dim, dim));
        for d in 0..dim {
            m[[d, d]] = C64::new((w * (1.0 + 0.1 * d as f64) / 1.5).sqrt(), 0.0);
        }
        diag_ops.push((i as f64, Operator::new(m).unwrap()));
    }
    // renormalize into a complete family
    let mut total = Operator::zeros(dim);
    for (_, m) in &diag_ops {
        total = &total + &(&m.adjoint() * m);
    }
    let inv_sqrt = {
        let mut m = Array2::<C64>::zeros((dim, dim));
        for d in 0..dim {
            m[[d, d]] = C64::new(1.0 / total.entries()[[d, d]].re.sqrt(), 0.0);
        }
        Operator::new(m).unwrap()
    };
    let outcomes: Vec<(f64, Operator)> = diag_ops
        .into_iter()
        .map(|(l, m)| (l, &m * &inv_sqrt))
        .collect();
    let f = MeasurementFamily::new(dim, outcomes).unwrap();

    let mut diag_a = Array2::<C64>::zeros((dim, dim));
    let mut diag_b = Array2::<C64>::zeros((dim, dim));
    for d in 0..dim {
        diag_a[[d, d]] = C64::new(d as f64 - 1.0, 0.0);
        diag_b[[d, d]] = C64::new((d * d) as f64, 0.0);
    }
    let a = Observable::from_operator(Operator::new(diag_a).unwrap()).unwrap();
    let b_op = Operator::new(diag_b).unwrap();
    let b = Observable::from_operator(b_op.clone()).unwrap();

    let residual = quncert_core::relations::heisenberg_criterion_residual(&f, &a, &b_op).unwrap();
    assert!(residual <= 1e-9, "criterion residual {residual}");

    for _ in 0..1000 {
        let psi = haar_random_ket(dim, &mut rng);
        let r = quncert_core::relations::heisenberg_nd(&f, &a, &b, &psi).unwrap();
        assert!(r.pass, "margin {}", r.margin);
    }
}
