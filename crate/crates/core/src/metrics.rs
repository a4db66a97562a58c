//! Scalar and operator-valued uncertainty quantities.
//!
//! For a family `{M_m}`, observable `A`, and pure state ψ:
//!
//! - standard deviation σ(A)² = ⟨A²⟩ − ⟨A⟩²
//! - rms noise       ε(A)² = Σ_m ‖M_m (m − A) ψ‖²
//! - rms disturbance η(B)² = Σ_m ‖[M_m, B] ψ‖²
//! - mean noise operator       n_A = Σ_m m M†M − A
//! - mean disturbance operator d_B = Σ_m M† B M − B
//!
//! ε is also computable from the POM effects alone and η from the channel
//! alone; those alternate routes are exposed here and cross-checked against
//! the ancilla-model recomputation in [`crate::dilation`].

use crate::error::{Error, Result};
use crate::hilbert::{
    C64, Ket, Observable, Operator, real_expectation, vector_norm,
};
use crate::measurement::{JointFamily, MeasurementFamily, Pom};
use crate::tol::Tolerances;

/// The scalar bundle consumed by relation evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseQuantities {
    pub epsilon: f64,
    pub eta: f64,
    pub sigma_a: f64,
    pub sigma_b: f64,
    /// ½|⟨[A,B]⟩|
    pub commutator_bound: f64,
}

/// Standard deviation of an observable in a pure state.
pub fn sigma(a: &Observable, psi: &Ket) -> Result<f64> {
    check_dim(a.dim(), psi)?;
    let mean = real_expectation(a.op(), psi)?;
    // ⟨(A−⟨A⟩)²⟩ as a squared vector norm, non-negative by construction
    let id = Operator::identity(a.dim());
    let centered = a.op() - &id.scale_re(mean);
    Ok(vector_norm(&centered.apply(psi)))
}

/// rms noise ε(A) of a measurement family on ψ.
pub fn epsilon(f: &MeasurementFamily, a: &Observable, psi: &Ket) -> Result<f64> {
    check_family_dims(f, a.dim(), psi)?;
    let a_psi = a.op().apply(psi);
    let mut acc = 0.0;
    for (m, op) in f.outcomes() {
        let shifted: ndarray::Array1<C64> =
            psi.amplitudes().mapv(|z| z * C64::new(*m, 0.0)) - &a_psi;
        acc += vector_norm(&op.apply_vec(&shifted)).powi(2);
    }
    Ok(acc.sqrt())
}

/// Single-sum noise formula ε(A) = ‖Σ_m m M_m ψ − A ψ‖, valid when the
/// measurement operators have mutually orthogonal ranges.
pub fn epsilon_orthogonal(f: &MeasurementFamily, a: &Observable, psi: &Ket) -> Result<f64> {
    check_family_dims(f, a.dim(), psi)?;
    let tol = Tolerances::DEFAULT;
    let mut worst = 0.0f64;
    for (i, (_, mi)) in f.outcomes().iter().enumerate() {
        for (_, mj) in f.outcomes().iter().skip(i + 1) {
            worst = worst.max((&mi.adjoint() * mj).operator_norm());
        }
    }
    if worst > tol.orthogonal_ranges {
        return Err(Error::OrthogonalityViolated { deviation: worst });
    }
    let mut acc = ndarray::Array1::<C64>::zeros(psi.dim());
    for (m, op) in f.outcomes() {
        acc = acc + op.apply(psi).mapv(|z| z * C64::new(*m, 0.0));
    }
    acc = acc - a.op().apply(psi);
    Ok(vector_norm(&acc))
}

/// rms noise computed from the POM effects alone:
/// ε² = ⟨A²⟩ + Σ_m m²⟨ψ|Π|ψ⟩ + Σ_m m(⟨ψ|Π|ψ⟩ + ⟨Aψ|Π|Aψ⟩ − ⟨(A+I)ψ|Π|(A+I)ψ⟩),
/// the auxiliary vectors Aψ and (A+I)ψ entering unnormalized.
pub fn epsilon_from_pom(p: &Pom, a: &Observable, psi: &Ket) -> Result<f64> {
    check_dim(a.dim(), psi)?;
    if p.dim() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "pom dim {} vs observable dim {}",
            p.dim(),
            a.dim()
        )));
    }
    let a_sq = real_expectation(&(a.op() * a.op()), psi)?;
    let psi_v = psi.amplitudes().clone();
    let a_psi = a.op().apply(psi);
    let a_plus_psi = &a_psi + psi.amplitudes();

    let quad = |e: &Operator, v: &ndarray::Array1<C64>| -> f64 {
        crate::hilbert::vector_inner(v, &e.apply_vec(v)).re
    };

    let mut eps_sq = a_sq;
    for (m, e) in p.effects() {
        let p_psi = quad(e, &psi_v);
        eps_sq += m * m * p_psi;
        eps_sq += m * (p_psi + quad(e, &a_psi) - quad(e, &a_plus_psi));
    }
    Ok(eps_sq.max(0.0).sqrt())
}

/// rms disturbance η(B) caused by the family's nonselective reduction.
pub fn eta(f: &MeasurementFamily, b: &Operator, psi: &Ket) -> Result<f64> {
    check_family_dims(f, b.dim(), psi)?;
    check_hermitian(b)?;
    let b_psi = b.apply(psi);
    let mut acc = 0.0;
    for (_, m) in f.outcomes() {
        let diff = m.apply_vec(&b_psi) - b.apply_vec(&m.apply(psi));
        acc += vector_norm(&diff).powi(2);
    }
    Ok(acc.sqrt())
}

/// Mean noise operator n_A = Σ_m m M†M − A.
pub fn mean_noise_operator(f: &MeasurementFamily, a: &Observable) -> Result<Operator> {
    if f.dim() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "family dim {} vs observable dim {}",
            f.dim(),
            a.dim()
        )));
    }
    let mut acc = Operator::zeros(f.dim());
    for (m, op) in f.outcomes() {
        acc = &acc + &(&op.adjoint() * op).scale_re(*m);
    }
    Ok(&acc - a.op())
}

/// Mean disturbance operator d_B = Σ_m M† B M − B = T*B − B.
pub fn mean_disturbance_operator(f: &MeasurementFamily, b: &Operator) -> Result<Operator> {
    if f.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "family dim {} vs operator dim {}",
            f.dim(),
            b.dim()
        )));
    }
    check_hermitian(b)?;
    let dual = f.tpcp_map().apply_dual(b)?;
    Ok(&dual - b)
}

/// Meter-output standard deviations (σ(M_A), σ(M_B)) of a jointly unbiased
/// joint family: σ(M_A)² = Σ_{a,b} ‖(a − ⟨A⟩) M_{a,b} ψ‖².
pub fn joint_meter_sigma(
    j: &JointFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<(f64, f64)> {
    check_joint(j, a, b, psi)?;
    let mean_a = real_expectation(a.op(), psi)?;
    let mean_b = real_expectation(b.op(), psi)?;
    let mut acc_a = 0.0;
    let mut acc_b = 0.0;
    for ((la, lb), m) in j.outcomes() {
        let w = vector_norm(&m.apply(psi)).powi(2);
        acc_a += (la - mean_a).powi(2) * w;
        acc_b += (lb - mean_b).powi(2) * w;
    }
    Ok((acc_a.sqrt(), acc_b.sqrt()))
}

/// Noise-operator deviations (σ(N_A), σ(N_B)) of a jointly unbiased joint
/// family: σ(N_A)² = Σ_{a,b} ‖M_{a,b} (a − A) ψ‖² (⟨N⟩ = 0 under the gate).
pub fn joint_noise_sigma(
    j: &JointFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<(f64, f64)> {
    check_joint(j, a, b, psi)?;
    let a_psi = a.op().apply(psi);
    let b_psi = b.op().apply(psi);
    let mut acc_a = 0.0;
    let mut acc_b = 0.0;
    for ((la, lb), m) in j.outcomes() {
        let va: ndarray::Array1<C64> =
            psi.amplitudes().mapv(|z| z * C64::new(*la, 0.0)) - &a_psi;
        let vb: ndarray::Array1<C64> =
            psi.amplitudes().mapv(|z| z * C64::new(*lb, 0.0)) - &b_psi;
        acc_a += vector_norm(&m.apply_vec(&va)).powi(2);
        acc_b += vector_norm(&m.apply_vec(&vb)).powi(2);
    }
    Ok((acc_a.sqrt(), acc_b.sqrt()))
}

/// All scalars entering the single-family relation suite.
pub fn noise_quantities(
    f: &MeasurementFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<NoiseQuantities> {
    let com = crate::hilbert::commutator(a.op(), b.op())?;
    let bound = 0.5 * crate::hilbert::expectation(&com, psi)?.norm();
    Ok(NoiseQuantities {
        epsilon: epsilon(f, a, psi)?,
        eta: eta(f, b.op(), psi)?,
        sigma_a: sigma(a, psi)?,
        sigma_b: sigma(b, psi)?,
        commutator_bound: bound,
    })
}

fn check_dim(dim: usize, psi: &Ket) -> Result<()> {
    if psi.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs operator dim {dim}",
            psi.dim()
        )));
    }
    Ok(())
}

fn check_family_dims(f: &MeasurementFamily, op_dim: usize, psi: &Ket) -> Result<()> {
    if f.dim() != op_dim {
        return Err(Error::DimensionMismatch(format!(
            "family dim {} vs operator dim {op_dim}",
            f.dim()
        )));
    }
    check_dim(f.dim(), psi)
}

fn check_hermitian(b: &Operator) -> Result<()> {
    let tol = Tolerances::DEFAULT;
    let dev = b.hermitian_deviation();
    if dev > tol.hermitian {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: tol.hermitian,
        });
    }
    Ok(())
}

fn check_joint(j: &JointFamily, a: &Observable, b: &Observable, psi: &Ket) -> Result<()> {
    if j.dim() != a.dim() || j.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "joint family dim {} vs observable dims {}/{}",
            j.dim(),
            a.dim(),
            b.dim()
        )));
    }
    check_dim(j.dim(), psi)?;
    let tol = Tolerances::DEFAULT;
    let (ra, rb) = j.unbiasedness_residual(a, b)?;
    if ra > tol.joint_unbiasedness || rb > tol.joint_unbiasedness {
        return Err(Error::NotJointlyUnbiased {
            residual_a: ra,
            residual_b: rb,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::random::{derived_stream, haar_random_ket, random_observable};
    use crate::hilbert::pauli;

    fn z_obs() -> Observable {
        Observable::from_operator(pauli::z()).unwrap()
    }

    fn x_obs() -> Observable {
        Observable::from_operator(pauli::x()).unwrap()
    }

    fn proj_z() -> MeasurementFamily {
        MeasurementFamily::projective(&z_obs())
    }

    fn plus() -> Ket {
        Ket::from_components(&[(1.0, 0.0), (1.0, 0.0)]).unwrap()
    }

    fn trivial_family() -> MeasurementFamily {
        MeasurementFamily::new(2, vec![(0.0, Operator::identity(2))]).unwrap()
    }

    #[test]
    fn sigma_eigenstate_and_superposition() {
        assert!(sigma(&z_obs(), &Ket::basis(2, 0)).unwrap() < 1e-12);
        assert!((sigma(&z_obs(), &plus()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_matches_moment_oracle() {
        let mut rng = derived_stream(300, 0);
        for _ in 0..20 {
            let a = random_observable(4, &mut rng);
            let psi = haar_random_ket(4, &mut rng);
            let s = sigma(&a, &psi).unwrap();
            // oracle: ⟨A²⟩ − ⟨A⟩² from raw moments
            let m1 = real_expectation(a.op(), &psi).unwrap();
            let m2 = real_expectation(&(a.op() * a.op()), &psi).unwrap();
            assert!(s >= 0.0);
            assert!((s - (m2 - m1 * m1).max(0.0).sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn epsilon_of_projective_family_vanishes() {
        let mut rng = derived_stream(300, 1);
        for _ in 0..20 {
            let psi = haar_random_ket(2, &mut rng);
            assert!(epsilon(&proj_z(), &z_obs(), &psi).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn epsilon_of_constant_output_measurement() {
        let e = epsilon(&trivial_family(), &z_obs(), &Ket::basis(2, 0)).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epsilon_cross_basis_matches_term_sum_oracle() {
        // oracle: explicit 2×2 evaluation of Σ_m ‖E^X_m (m − Z)|0⟩‖².
        // The m=+1 term vanishes, the m=−1 term is ‖−2·E^X_₋|0⟩‖² = 2.
        let f = MeasurementFamily::projective(&x_obs());
        let e = epsilon(&f, &z_obs(), &Ket::basis(2, 0)).unwrap();
        assert!((e - f64::sqrt(2.0)).abs() < 1e-12, "epsilon = {e}");
    }

    #[test]
    fn epsilon_orthogonal_agrees_on_projective_families() {
        let e = epsilon_orthogonal(&proj_z(), &z_obs(), &plus()).unwrap();
        assert!(e <= 1e-10);
        let psi = Ket::basis(2, 0);
        let a = epsilon(&proj_z(), &x_obs(), &psi).unwrap();
        let b = epsilon_orthogonal(&proj_z(), &x_obs(), &psi).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn epsilon_orthogonal_gates_on_range_overlap() {
        let c = 1.0 / f64::sqrt(2.0);
        let f = MeasurementFamily::new(
            2,
            vec![
                (0.0, Operator::identity(2).scale_re(c)),
                (1.0, Operator::identity(2).scale_re(c)),
            ],
        )
        .unwrap();
        assert!(matches!(
            epsilon_orthogonal(&f, &z_obs(), &plus()),
            Err(Error::OrthogonalityViolated { .. })
        ));
    }

    #[test]
    fn epsilon_from_pom_fixed_cases() {
        assert!(epsilon_from_pom(&proj_z().pom(), &z_obs(), &plus()).unwrap() < 1e-7);
        let e = epsilon_from_pom(&trivial_family().pom(), &z_obs(), &Ket::basis(2, 0)).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epsilon_from_pom_matches_kraus_route() {
        let mut rng = derived_stream(300, 2);
        for dim in 2..=5 {
            for _ in 0..10 {
                let f = MeasurementFamily::random(dim, 3, &mut rng);
                let a = random_observable(dim, &mut rng);
                let psi = haar_random_ket(dim, &mut rng);
                let via_kraus = epsilon(&f, &a, &psi).unwrap();
                let via_pom = epsilon_from_pom(&f.pom(), &a, &psi).unwrap();
                assert!(
                    (via_kraus - via_pom).abs() < 1e-9,
                    "dim {dim}: {via_kraus} vs {via_pom}"
                );
            }
        }
    }

    #[test]
    fn eta_pauli_constant() {
        let mut rng = derived_stream(300, 3);
        for _ in 0..20 {
            let psi = haar_random_ket(2, &mut rng);
            let h = eta(&proj_z(), &pauli::x(), &psi).unwrap();
            assert!((h - f64::sqrt(2.0)).abs() < 1e-10, "eta = {h}");
        }
    }

    #[test]
    fn eta_identity_channel_and_compatible_observable() {
        let id_family = MeasurementFamily::new(2, vec![(1.0, Operator::identity(2))]).unwrap();
        let mut rng = derived_stream(300, 4);
        let psi = haar_random_ket(2, &mut rng);
        assert!(eta(&id_family, &pauli::y(), &psi).unwrap() < 1e-12);
        // [E^Z_m, Z] = 0
        assert!(eta(&proj_z(), &pauli::z(), &psi).unwrap() < 1e-12);
    }

    #[test]
    fn eta_rejects_non_hermitian() {
        let g = Operator::from_rows(&[
            vec![(0.0, 0.0), (1.0, 0.0)],
            vec![(0.0, 0.0), (0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            eta(&proj_z(), &g, &plus()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn mean_noise_operator_cases() {
        let n = mean_noise_operator(&proj_z(), &z_obs()).unwrap();
        assert!(n.operator_norm() < 1e-12);
        let n = mean_noise_operator(&trivial_family(), &z_obs()).unwrap();
        assert!(n.distance(&pauli::z().scale_re(-1.0)) < 1e-12);
        // random family: matches Σ m Π_m − A through the POM route
        let mut rng = derived_stream(300, 5);
        let f = MeasurementFamily::random(3, 4, &mut rng);
        let a = random_observable(3, &mut rng);
        let n = mean_noise_operator(&f, &a).unwrap();
        let mut via_pom = Operator::zeros(3);
        for (m, e) in f.pom().effects() {
            via_pom = &via_pom + &e.scale_re(*m);
        }
        via_pom = &via_pom - a.op();
        assert!(n.distance(&via_pom) < 1e-10);
        assert!(n.hermitian_deviation() < 1e-10);
    }

    #[test]
    fn mean_disturbance_operator_cases() {
        let d = mean_disturbance_operator(&proj_z(), &pauli::x()).unwrap();
        assert!(d.distance(&pauli::x().scale_re(-1.0)) < 1e-12);
        let d = mean_disturbance_operator(&proj_z(), &pauli::z()).unwrap();
        assert!(d.operator_norm() < 1e-12);
        let id_family = MeasurementFamily::new(2, vec![(1.0, Operator::identity(2))]).unwrap();
        let d = mean_disturbance_operator(&id_family, &pauli::y()).unwrap();
        assert!(d.operator_norm() < 1e-12);
    }

    fn degenerate_z_joint() -> JointFamily {
        let z = z_obs();
        JointFamily::new(
            2,
            z.outcomes().map(|(m, e)| ((m, 0.0), e.clone())).collect(),
        )
        .unwrap()
    }

    fn zero_obs() -> Observable {
        Observable::from_operator(Operator::zeros(2)).unwrap()
    }

    #[test]
    fn joint_meter_sigma_degenerate_cases() {
        let j = degenerate_z_joint();
        let (sa, sb) = joint_meter_sigma(&j, &z_obs(), &zero_obs(), &plus()).unwrap();
        assert!((sa - 1.0).abs() < 1e-12);
        assert!(sb < 1e-12);
        let (sa, sb) = joint_meter_sigma(&j, &z_obs(), &zero_obs(), &Ket::basis(2, 0)).unwrap();
        assert!(sa < 1e-12);
        assert!(sb < 1e-12);
    }

    #[test]
    fn joint_noise_sigma_degenerate_and_constant_cases() {
        let j = degenerate_z_joint();
        let (na, nb) = joint_noise_sigma(&j, &z_obs(), &zero_obs(), &plus()).unwrap();
        assert!(na < 1e-12);
        assert!(nb < 1e-12);

        // constant observable with constant unit label: zero noise
        let id_obs = Observable::from_operator(Operator::identity(2)).unwrap();
        let j = JointFamily::new(
            2,
            z_obs()
                .outcomes()
                .map(|(m, e)| ((1.0, m), e.clone()))
                .collect(),
        )
        .unwrap();
        let (na, _) = joint_noise_sigma(&j, &id_obs, &z_obs(), &plus()).unwrap();
        assert!(na < 1e-12);
    }

    #[test]
    fn joint_quantities_match_brute_force_sums() {
        let lam = 1.0 / f64::sqrt(2.0);
        let j = JointFamily::unbiased_unsharp_product(&z_obs(), &x_obs(), lam, lam).unwrap();
        let mut rng = derived_stream(300, 6);
        let psi = haar_random_ket(2, &mut rng);
        let (sa, sb) = joint_meter_sigma(&j, &z_obs(), &x_obs(), &psi).unwrap();
        let (na, nb) = joint_noise_sigma(&j, &z_obs(), &x_obs(), &psi).unwrap();

        // independent brute-force accumulation over the outcome grid
        let mean_a = real_expectation(&pauli::z(), &psi).unwrap();
        let mean_b = real_expectation(&pauli::x(), &psi).unwrap();
        let (mut bsa, mut bsb, mut bna, mut bnb) = (0.0, 0.0, 0.0, 0.0);
        for ((la, lb), m) in j.outcomes() {
            let w = vector_norm(&m.apply(&psi)).powi(2);
            bsa += (la - mean_a).powi(2) * w;
            bsb += (lb - mean_b).powi(2) * w;
            let va = psi.amplitudes().mapv(|z| z * C64::new(*la, 0.0))
                - &pauli::z().apply(&psi);
            let vb = psi.amplitudes().mapv(|z| z * C64::new(*lb, 0.0))
                - &pauli::x().apply(&psi);
            bna += vector_norm(&m.apply_vec(&va)).powi(2);
            bnb += vector_norm(&m.apply_vec(&vb)).powi(2);
        }
        assert!((sa - bsa.sqrt()).abs() < 1e-10);
        assert!((sb - bsb.sqrt()).abs() < 1e-10);
        assert!((na - bna.sqrt()).abs() < 1e-10);
        assert!((nb - bnb.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn joint_quantities_gate_on_bias() {
        let j = degenerate_z_joint();
        assert!(matches!(
            joint_meter_sigma(&j, &z_obs(), &x_obs(), &plus()),
            Err(Error::NotJointlyUnbiased { .. })
        ));
        assert!(matches!(
            joint_noise_sigma(&j, &z_obs(), &x_obs(), &plus()),
            Err(Error::NotJointlyUnbiased { .. })
        ));
    }
}
