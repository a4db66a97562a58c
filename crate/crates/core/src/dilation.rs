//! Constructive unitary ancilla models for measurement families.
//!
//! [`dilate`] turns any family `{M_m}` with `k` outcomes into a measuring
//! process `(ancilla C^k, ξ = |0⟩, U, meter Σ_m m |m⟩⟨m|)`: the map
//! `ψ⊗ξ ↦ Σ_m (M_m ψ)⊗|m⟩` is an isometry by completeness and is extended
//! to a full unitary by deterministic orthonormal completion. The model side
//! then recomputes output statistics, post-states, noise, and disturbance,
//! serving as an independent oracle for the Kraus-side formulas.

use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{
    C64, DensityOperator, Ket, Observable, Operator, partial_inner_ancilla, partial_trace_ancilla,
    tensor, vector_inner, vector_norm,
};
use crate::measurement::{MeasurementFamily, Pom, TpcpMap};
use crate::tol::Tolerances;

/// A pure measuring process: ancilla state ξ, coupling unitary `U` on
/// system⊗ancilla, and a meter observable on the ancilla.
#[derive(Debug, Clone)]
pub struct MeasuringProcess {
    system_dim: usize,
    ancilla_dim: usize,
    xi: Ket,
    u: Operator,
    meter: Observable,
}

impl MeasuringProcess {
    pub fn new(system_dim: usize, xi: Ket, u: Operator, meter: Observable) -> Result<Self> {
        let ancilla_dim = xi.dim();
        if meter.dim() != ancilla_dim {
            return Err(Error::DimensionMismatch(format!(
                "meter dim {} vs ancilla dim {ancilla_dim}",
                meter.dim()
            )));
        }
        if u.dim() != system_dim * ancilla_dim {
            return Err(Error::DimensionMismatch(format!(
                "unitary dim {} vs system·ancilla {}",
                u.dim(),
                system_dim * ancilla_dim
            )));
        }
        let tol = Tolerances::DEFAULT;
        let dev = u.unitary_deviation();
        if dev > tol.unitary {
            return Err(Error::NotUnitary {
                deviation: dev,
                tol: tol.unitary,
            });
        }
        Ok(Self {
            system_dim,
            ancilla_dim,
            xi,
            u,
            meter,
        })
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn xi(&self) -> &Ket {
        &self.xi
    }

    pub fn unitary(&self) -> &Operator {
        &self.u
    }

    pub fn meter(&self) -> &Observable {
        &self.meter
    }

    /// Replaces the coupling unitary, revalidating unitarity. Intended for
    /// audits that probe corrupted models.
    pub fn with_unitary(&self, u: Operator) -> Result<Self> {
        Self::new(self.system_dim, self.xi.clone(), u, self.meter.clone())
    }
}

/// Hermitian noise and disturbance operators of a dilated model:
/// `N_A = U†(I⊗M)U − A⊗I` and `D_B = U†(B⊗I)U − B⊗I`.
#[derive(Debug, Clone)]
pub struct DilatedNoiseOperators {
    pub n_op: Operator,
    pub d_op: Operator,
}

/// Builds the canonical dilation of a family (outcomes in ascending label
/// order along the ancilla axis, completion columns in index order).
pub fn dilate(f: &MeasurementFamily) -> MeasuringProcess {
    dilate_with_completion_permutation(f, None).expect("canonical dilation")
}

/// [`dilate`] with the orthonormal completion columns permuted by `perm`
/// (a permutation of `0..d·(k−1)`). Realized statistics are invariant under
/// this choice; it exists to exercise exactly that invariance.
pub fn dilate_with_completion_permutation(
    f: &MeasurementFamily,
    perm: Option<&[usize]>,
) -> Result<MeasuringProcess> {
    let d = f.dim();
    let k = f.len();
    let n = d * k;

    let mut sorted: Vec<(f64, &Operator)> = f.outcomes().iter().map(|(m, op)| (*m, op)).collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // Isometry columns: column for system basis i' carries Σ_j (M_j e_i')⊗|j⟩.
    let mut fixed: Vec<Array1<C64>> = Vec::with_capacity(d);
    for ip in 0..d {
        let mut col = Array1::<C64>::zeros(n);
        for (j, (_, m)) in sorted.iter().enumerate() {
            for i in 0..d {
                col[i * k + j] = m.entries()[[i, ip]];
            }
        }
        fixed.push(col);
    }

    let completion = orthonormal_completion(&fixed, n)?;
    let expected = n - d;
    let completion = match perm {
        None => completion,
        Some(p) => {
            if p.len() != expected {
                return Err(Error::DimensionMismatch(format!(
                    "permutation length {} vs completion size {expected}",
                    p.len()
                )));
            }
            let mut seen = vec![false; expected];
            for &i in p {
                if i >= expected || seen[i] {
                    return Err(Error::DimensionMismatch(
                        "invalid completion permutation".into(),
                    ));
                }
                seen[i] = true;
            }
            p.iter().map(|&i| completion[i].clone()).collect()
        }
    };

    // Column (i', 0) is fixed; columns (i', j≥1) take completion vectors in
    // lexicographic order.
    let mut u = Array2::<C64>::zeros((n, n));
    let mut next = completion.into_iter();
    for ip in 0..d {
        for j in 0..k {
            let col = if j == 0 {
                fixed[ip].clone()
            } else {
                next.next().expect("completion exhausted early")
            };
            for row in 0..n {
                u[[row, ip * k + j]] = col[row];
            }
        }
    }

    let meter = Observable::from_spectrum(
        sorted
            .iter()
            .enumerate()
            .map(|(j, (m, _))| (*m, Ket::basis(k, j).projector()))
            .collect(),
    )
    .expect("distinct labels with basis projectors");

    MeasuringProcess::new(d, Ket::basis(k, 0), Operator::new(u)?, meter)
}

/// Orthonormal basis of the complement of `fixed` (already orthonormal),
/// by doubly re-orthogonalized Gram–Schmidt over the standard basis in
/// index order.
fn orthonormal_completion(fixed: &[Array1<C64>], n: usize) -> Result<Vec<Array1<C64>>> {
    let mut basis: Vec<Array1<C64>> = fixed.to_vec();
    let mut completion = Vec::with_capacity(n - fixed.len());
    for t in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = Array1::<C64>::zeros(n);
        v[t] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let overlap = vector_inner(b, &v);
                v = v - b.mapv(|z| z * overlap);
            }
        }
        let norm = vector_norm(&v);
        if norm > 1e-7 {
            let v = v.mapv(|z| z / norm);
            basis.push(v.clone());
            completion.push(v);
        }
    }
    if basis.len() != n {
        return Err(Error::Linalg(
            "orthonormal completion did not span the space".into(),
        ));
    }
    Ok(completion)
}

/// Maximum deviation of the realization identities over all outcomes and a
/// spanning set of pure input states:
/// `M_m ρ M† = Tr_K[(I⊗E_m) U (ρ⊗|ξ⟩⟨ξ|) U†]` and
/// `M†M = ⟨ξ|U†(I⊗E_m)U|ξ⟩_K`.
pub fn verify_realization(p: &MeasuringProcess, f: &MeasurementFamily) -> Result<f64> {
    let d = f.dim();
    if p.system_dim != d {
        return Err(Error::DimensionMismatch(format!(
            "process system dim {} vs family dim {d}",
            p.system_dim
        )));
    }
    let xi_proj = p.xi.projector();
    let id_sys = Operator::identity(d);
    let u_dag = p.u.adjoint();

    let mut worst = 0.0f64;
    for (label, m) in f.outcomes() {
        let e_meter = meter_projector(p, *label)?;
        let lifted = tensor(&id_sys, &e_meter);

        // POM identity
        let pom_model = partial_inner_ancilla(&(&(&u_dag * &lifted) * &p.u), &p.xi)?;
        worst = worst.max(pom_model.distance(&(&m.adjoint() * m)));

        // instrument identity over a spanning set of pure states
        for psi in spanning_states(d) {
            let rho = psi.projector();
            let lhs = &(m * &rho) * &m.adjoint();
            let big = &(&p.u * &tensor(&rho, &xi_proj)) * &u_dag;
            let rhs = partial_trace_ancilla(&(&lifted * &big), p.ancilla_dim)?;
            worst = worst.max(lhs.distance(&rhs));
        }
    }
    Ok(worst)
}

fn meter_projector(p: &MeasuringProcess, label: f64) -> Result<Operator> {
    p.meter
        .outcomes()
        .find(|(m, _)| (m - label).abs() <= 1e-12)
        .map(|(_, e)| e.clone())
        .ok_or(Error::LabelMismatch)
}

/// Pure states spanning the hermitian operators on `C^d`: basis vectors plus
/// the two-level real and imaginary superpositions.
fn spanning_states(d: usize) -> Vec<Ket> {
    let mut states = Vec::new();
    for i in 0..d {
        states.push(Ket::basis(d, i));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let mut v = Array1::<C64>::zeros(d);
            v[i] = C64::new(1.0, 0.0);
            v[j] = C64::new(1.0, 0.0);
            states.push(Ket::new(v.clone()).unwrap());
            v[j] = C64::new(0.0, 1.0);
            states.push(Ket::new(v).unwrap());
        }
    }
    states
}

/// The dilated noise operator `N_A` and disturbance operator `D_B`.
pub fn noise_operators(
    p: &MeasuringProcess,
    a: &Observable,
    b: &Operator,
) -> Result<DilatedNoiseOperators> {
    check_system_dim(p, a.dim())?;
    check_system_dim(p, b.dim())?;
    let id_sys = Operator::identity(p.system_dim);
    let id_anc = Operator::identity(p.ancilla_dim);
    let u_dag = p.u.adjoint();
    let meter_lifted = tensor(&id_sys, p.meter.op());
    let n_op = &(&(&u_dag * &meter_lifted) * &p.u) - &tensor(a.op(), &id_anc);
    let b_lifted = tensor(b, &id_anc);
    let d_op = &(&(&u_dag * &b_lifted) * &p.u) - &b_lifted;
    Ok(DilatedNoiseOperators { n_op, d_op })
}

/// Model-side rms noise: ‖(U†(I⊗M)U − A⊗I)(ψ⊗ξ)‖.
pub fn model_epsilon(p: &MeasuringProcess, a: &Observable, psi: &Ket) -> Result<f64> {
    check_system_dim(p, a.dim())?;
    check_system_dim(p, psi.dim())?;
    let ops = noise_operators(p, a, &Operator::identity(p.system_dim))?;
    let big = psi.tensor(&p.xi);
    Ok(vector_norm(&ops.n_op.apply(&big)))
}

/// Model-side rms disturbance: ‖(U†(B⊗I)U − B⊗I)(ψ⊗ξ)‖.
pub fn model_eta(p: &MeasuringProcess, b: &Operator, psi: &Ket) -> Result<f64> {
    check_system_dim(p, b.dim())?;
    check_system_dim(p, psi.dim())?;
    let a_placeholder = Observable::from_operator(Operator::identity(p.system_dim))
        .expect("identity decomposes");
    let ops = noise_operators(p, &a_placeholder, b)?;
    let big = psi.tensor(&p.xi);
    Ok(vector_norm(&ops.d_op.apply(&big)))
}

/// Born-rule output probability of one outcome through the model:
/// `Tr[(I⊗E_m) U (ρ⊗|ξ⟩⟨ξ|) U†]`.
pub fn model_outcome_probability(
    p: &MeasuringProcess,
    label: f64,
    state: &DensityOperator,
) -> Result<f64> {
    check_system_dim(p, state.dim())?;
    let e = meter_projector(p, label)?;
    let lifted = tensor(&Operator::identity(p.system_dim), &e);
    let big = &(&p.u * &tensor(state.op(), &p.xi.projector())) * &p.u.adjoint();
    Ok((&lifted * &big).trace().re.clamp(0.0, 1.0))
}

/// Realizes a POM by dilating its square-root family `M_m = Π_m^{1/2}`.
pub fn realize_pom(p: &Pom) -> Result<MeasuringProcess> {
    let tol = Tolerances::DEFAULT;
    let outcomes = p
        .effects()
        .iter()
        .map(|(m, e)| Ok((*m, e.sqrt_psd(&tol)?)))
        .collect::<Result<Vec<_>>>()?;
    let family = MeasurementFamily::new(p.dim(), outcomes)?;
    Ok(dilate(&family))
}

/// Realizes a TPCP map by dilating its Kraus family under labels `1..=k`
/// (any distinct labels realize the same channel).
pub fn realize_tpcp(t: &TpcpMap) -> Result<MeasuringProcess> {
    let outcomes = t
        .kraus()
        .iter()
        .enumerate()
        .map(|(i, k)| ((i + 1) as f64, k.clone()))
        .collect();
    let family = MeasurementFamily::new(t.dim(), outcomes)?;
    Ok(dilate(&family))
}

/// Nonselective reduction through the model: `Tρ = Tr_K[U(ρ⊗|ξ⟩⟨ξ|)U†]`.
pub fn model_nonselective(p: &MeasuringProcess, rho: &Operator) -> Result<Operator> {
    check_system_dim(p, rho.dim())?;
    let big = &(&p.u * &tensor(rho, &p.xi.projector())) * &p.u.adjoint();
    partial_trace_ancilla(&big, p.ancilla_dim)
}

/// Dual channel through the model: `T*A = Tr_K[U†(A⊗I)U(I⊗|ξ⟩⟨ξ|)]`,
/// evaluated as the partial inner product against ξ.
pub fn model_dual(p: &MeasuringProcess, a: &Operator) -> Result<Operator> {
    check_system_dim(p, a.dim())?;
    let lifted = tensor(a, &Operator::identity(p.ancilla_dim));
    let m = &(&p.u.adjoint() * &lifted) * &p.u;
    partial_inner_ancilla(&m, &p.xi)
}

fn check_system_dim(p: &MeasuringProcess, dim: usize) -> Result<()> {
    if p.system_dim != dim {
        return Err(Error::DimensionMismatch(format!(
            "system dim {} vs operand dim {dim}",
            p.system_dim
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Wire format (audit output)
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct WireProcess<'a> {
    system_dim: usize,
    ancilla_dim: usize,
    xi: &'a Ket,
    u: &'a Operator,
    meter_labels: Vec<f64>,
    meter_matrix: Operator,
}

impl Serialize for MeasuringProcess {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireProcess {
            system_dim: self.system_dim,
            ancilla_dim: self.ancilla_dim,
            xi: &self.xi,
            u: &self.u,
            meter_labels: self.meter.eigenvalues().to_vec(),
            meter_matrix: self.meter.reconstruct(),
        }
        .serialize(s)
    }
}

// ---------------------------------------------------------------------------
