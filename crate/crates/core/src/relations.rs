//! Uncertainty inequalities evaluated as pass/fail reports.
//!
//! Every evaluator returns a [`RelationReport`] carrying the two sides of
//! the inequality, the margin `lhs − rhs`, and a pass flag with a fixed
//! numeric slack. Two kinds of relation coexist:
//!
//! - theorems that hold for every input (`robertson`, `universal`,
//!   `corrected_noise_disturbance`, `disturbance_bound`, and the joint
//!   suite under its unbiasedness gate) — a failing report signals an
//!   implementation defect, not physics;
//! - the Heisenberg-type noise-disturbance product (`heisenberg_nd`),
//!   which genuinely fails for e.g. projective measurements, and is
//!   reported as a finding.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Ket, Observable, Operator, commutator, expectation};
use crate::measurement::{JointFamily, MeasurementFamily};
use crate::metrics;
use crate::tol::Tolerances;

/// Identifier of one inequality or criterion; the serialized token is the
/// wire id used in scenario files and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationId {
    Robertson,
    HeisenbergNd,
    Universal,
    UniversalDimensionless,
    #[serde(rename = "thm8")]
    NoiseCorrectedProduct,
    ArthursGoodman,
    IshikawaOzawa,
    #[serde(rename = "thm4_joint")]
    JointNoiseProduct,
    #[serde(rename = "lemma6")]
    DisturbanceBound,
    #[serde(rename = "ndm")]
    NonDisturbing,
    #[serde(rename = "nlm")]
    Noiseless,
}

impl RelationId {
    /// Whether a failure of this relation indicates a defect (true) rather
    /// than a physical finding (false). Gated relations count as guaranteed
    /// only where applicable.
    pub fn guaranteed(self) -> bool {
        !matches!(self, RelationId::HeisenbergNd)
    }

    pub fn wire_name(self) -> &'static str {
        match self {
            RelationId::Robertson => "robertson",
            RelationId::HeisenbergNd => "heisenberg_nd",
            RelationId::Universal => "universal",
            RelationId::UniversalDimensionless => "universal_dimensionless",
            RelationId::NoiseCorrectedProduct => "thm8",
            RelationId::ArthursGoodman => "arthurs_goodman",
            RelationId::IshikawaOzawa => "ishikawa_ozawa",
            RelationId::JointNoiseProduct => "thm4_joint",
            RelationId::DisturbanceBound => "lemma6",
            RelationId::NonDisturbing => "ndm",
            RelationId::Noiseless => "nlm",
        }
    }
}

/// Outcome of evaluating one inequality on one input tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation_id: RelationId,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub margin: f64,
    /// `margin ≥ −numeric_slack`.
    pub pass: bool,
    /// False only for hypothesis-gated checks whose hypothesis failed on
    /// this input; `pass` should then be ignored.
    pub applicable: bool,
    /// Opaque hash of the evaluated inputs.
    pub inputs_digest: String,
}

fn report(id: RelationId, lhs: f64, rhs: f64, applicable: bool, digest: String) -> RelationReport {
    let margin = lhs - rhs;
    RelationReport {
        relation_id: id,
        lhs,
        rhs,
        margin,
        pass: margin >= -Tolerances::DEFAULT.numeric_slack,
        applicable,
        inputs_digest: digest,
    }
}

/// σ(A)σ(B) ≥ ½|⟨[A,B]⟩| — holds for every state.
pub fn robertson(a: &Observable, b: &Observable, psi: &Ket) -> Result<RelationReport> {
    let bound = commutator_bound(a.op(), b.op(), psi)?;
    let lhs = metrics::sigma(a, psi)? * metrics::sigma(b, psi)?;
    let digest = Digest::new("robertson").obs(a).obs(b).ket(psi).finish();
    Ok(report(RelationId::Robertson, lhs, bound, true, digest))
}

/// ε(A)η(B) ≥ ½|⟨[A,B]⟩| — the Heisenberg-type product; not guaranteed.
pub fn heisenberg_nd(
    f: &MeasurementFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<RelationReport> {
    let q = metrics::noise_quantities(f, a, b, psi)?;
    let digest = Digest::new("heisenberg_nd")
        .family(f)
        .obs(a)
        .obs(b)
        .ket(psi)
        .finish();
    Ok(report(
        RelationId::HeisenbergNd,
        q.epsilon * q.eta,
        q.commutator_bound,
        true,
        digest,
    ))
}

/// ε(A)η(B) + ε(A)σ(B) + σ(A)η(B) ≥ ½|⟨[A,B]⟩| — holds for every
/// measurement, observable pair, and state.
pub fn universal(
    f: &MeasurementFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<RelationReport> {
    let q = metrics::noise_quantities(f, a, b, psi)?;
    let lhs = q.epsilon * q.eta + q.epsilon * q.sigma_b + q.sigma_a * q.eta;
    let digest = Digest::new("universal")
        .family(f)
        .obs(a)
        .obs(b)
        .ket(psi)
        .finish();
    Ok(report(RelationId::Universal, lhs, q.commutator_bound, true, digest))
}

/// The dimensionless rearrangement of [`universal`]; requires both standard
/// deviations to be nonzero.
pub fn universal_dimensionless(
    f: &MeasurementFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<RelationReport> {
    let q = metrics::noise_quantities(f, a, b, psi)?;
    let floor = 1e-9;
    if q.sigma_a <= floor {
        return Err(Error::DegenerateSigma {
            observable: "A".into(),
        });
    }
    if q.sigma_b <= floor {
        return Err(Error::DegenerateSigma {
            observable: "B".into(),
        });
    }
    let lhs = q.epsilon * q.eta / (q.sigma_a * q.sigma_b)
        + q.epsilon / q.sigma_a
        + q.eta / q.sigma_b;
    let rhs = q.commutator_bound / (q.sigma_a * q.sigma_b);
    let digest = Digest::new("universal_dimensionless")
        .family(f)
        .obs(a)
        .obs(b)
        .ket(psi)
        .finish();
    Ok(report(
        RelationId::UniversalDimensionless,
        lhs,
        rhs,
        true,
        digest,
    ))
}

/// ε(A)η(B) + ½|⟨[n_A,B]⟩ − ⟨[d_B,A]⟩| ≥ ½|⟨[A,B]⟩| — the mean-operator
/// corrected product; holds for every input.
pub fn corrected_noise_disturbance(
    f: &MeasurementFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<RelationReport> {
    let q = metrics::noise_quantities(f, a, b, psi)?;
    let n_a = metrics::mean_noise_operator(f, a)?;
    let d_b = metrics::mean_disturbance_operator(f, b.op())?;
    let c1 = expectation(&commutator(&n_a, b.op())?, psi)?;
    let c2 = expectation(&commutator(&d_b, a.op())?, psi)?;
    let lhs = q.epsilon * q.eta + 0.5 * (c1 - c2).norm();
    let digest = Digest::new("thm8")
        .family(f)
        .obs(a)
        .obs(b)
        .ket(psi)
        .finish();
    Ok(report(
        RelationId::NoiseCorrectedProduct,
        lhs,
        q.commutator_bound,
        true,
        digest,
    ))
}

/// State-independent criterion residual ‖[n_A, B] − [d_B, A]‖: when it
/// vanishes, the Heisenberg-type product holds on every state.
pub fn heisenberg_criterion_residual(
    f: &MeasurementFamily,
    a: &Observable,
    b: &Operator,
) -> Result<f64> {
    let n_a = metrics::mean_noise_operator(f, a)?;
    let d_b = metrics::mean_disturbance_operator(f, b)?;
    let lhs = commutator(&n_a, b)?;
    let rhs = commutator(&d_b, a.op())?;
    Ok(lhs.distance(&rhs))
}

/// The hypothesis-gated pair: the non-disturbing bound
/// ε(A)σ(B) ≥ ½|⟨[A,B]⟩| under `[M_m,B]ψ = 0` for all m, and the noiseless
/// bound σ(A)η(B) ≥ ½|⟨[A,B]⟩| under `m M_m ψ = M_m A ψ` for all m.
/// Reports whose hypothesis fails come back flagged not-applicable.
pub fn gated_checks(
    f: &MeasurementFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<(RelationReport, RelationReport)> {
    let q = metrics::noise_quantities(f, a, b, psi)?;
    let tol = Tolerances::DEFAULT;

    let b_psi = b.op().apply(psi);
    let a_psi = a.op().apply(psi);
    let mut non_disturbing_dev = 0.0f64;
    let mut noiseless_dev = 0.0f64;
    for (m, op) in f.outcomes() {
        let comm = op.apply_vec(&b_psi) - b.op().apply_vec(&op.apply(psi));
        non_disturbing_dev =
            non_disturbing_dev.max(crate::hilbert::vector_norm(&comm));
        let nl = op.apply(psi).mapv(|z| z * crate::hilbert::C64::new(*m, 0.0))
            - op.apply_vec(&a_psi);
        noiseless_dev = noiseless_dev.max(crate::hilbert::vector_norm(&nl));
    }

    let base = Digest::new("gated").family(f).obs(a).obs(b).ket(psi).finish();
    let ndm = report(
        RelationId::NonDisturbing,
        q.epsilon * q.sigma_b,
        q.commutator_bound,
        non_disturbing_dev <= tol.hypothesis,
        base.clone(),
    );
    let nlm = report(
        RelationId::Noiseless,
        q.sigma_a * q.eta,
        q.commutator_bound,
        noiseless_dev <= tol.hypothesis,
        base,
    );
    Ok((ndm, nlm))
}

/// σ(M_A)σ(M_B) ≥ |⟨[A,B]⟩| for jointly unbiased joint measurements — note
/// the undoubled right-hand side.
pub fn arthurs_goodman(
    j: &JointFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<RelationReport> {
    let (sa, sb) = metrics::joint_meter_sigma(j, a, b, psi)?;
    let rhs = 2.0 * commutator_bound(a.op(), b.op(), psi)?;
    let digest = Digest::new("arthurs_goodman")
        .joint(j)
        .obs(a)
        .obs(b)
        .ket(psi)
        .finish();
    Ok(report(RelationId::ArthursGoodman, sa * sb, rhs, true, digest))
}

/// σ(N_A)σ(N_B) ≥ ½|⟨[A,B]⟩| for jointly unbiased joint measurements; the
/// noise-operator deviations subtract the (gate-small) first moments.
pub fn ishikawa_ozawa(
    j: &JointFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<RelationReport> {
    let (na, nb) = metrics::joint_noise_sigma(j, a, b, psi)?;
    let (ma, mb) = j.marginals();
    let mean = |pom: &crate::measurement::Pom, target: &Operator| -> Result<f64> {
        let mut acc = 0.0;
        for (l, e) in pom.effects() {
            acc += l * crate::hilbert::real_expectation(e, psi)?;
        }
        Ok(acc - crate::hilbert::real_expectation(target, psi)?)
    };
    let bias_a = mean(&ma, a.op())?;
    let bias_b = mean(&mb, b.op())?;
    let sa = (na * na - bias_a * bias_a).max(0.0).sqrt();
    let sb = (nb * nb - bias_b * bias_b).max(0.0).sqrt();
    let rhs = commutator_bound(a.op(), b.op(), psi)?;
    let digest = Digest::new("ishikawa_ozawa")
        .joint(j)
        .obs(a)
        .obs(b)
        .ket(psi)
        .finish();
    Ok(report(RelationId::IshikawaOzawa, sa * sb, rhs, true, digest))
}

/// ε(A)ε(B) ≥ ½|⟨[A,B]⟩| with the joint-family noise sums as the ε values.
pub fn joint_noise_product(
    j: &JointFamily,
    a: &Observable,
    b: &Observable,
    psi: &Ket,
) -> Result<RelationReport> {
    let (ea, eb) = metrics::joint_noise_sigma(j, a, b, psi)?;
    let rhs = commutator_bound(a.op(), b.op(), psi)?;
    let digest = Digest::new("thm4_joint")
        .joint(j)
        .obs(a)
        .obs(b)
        .ket(psi)
        .finish();
    Ok(report(RelationId::JointNoiseProduct, ea * eb, rhs, true, digest))
}

/// 2‖B‖ ≥ η(B) — the disturbance of a bounded observable is at most 2‖B‖.
pub fn disturbance_bound(f: &MeasurementFamily, b: &Operator, psi: &Ket) -> Result<RelationReport> {
    let eta = metrics::eta(f, b, psi)?;
    let lhs = 2.0 * b.operator_norm();
    let digest = Digest::new("lemma6").family(f).op(b).ket(psi).finish();
    Ok(report(RelationId::DisturbanceBound, lhs, eta, true, digest))
}

fn commutator_bound(a: &Operator, b: &Operator, psi: &Ket) -> Result<f64> {
    Ok(0.5 * expectation(&commutator(a, b)?, psi)?.norm())
}

// ---------------------------------------------------------------------------
// Input digests
// ---------------------------------------------------------------------------

struct Digest(DefaultHasher);

impl Digest {
    fn new(tag: &str) -> Self {
        let mut h = DefaultHasher::new();
        tag.hash(&mut h);
        Digest(h)
    }

    fn f64(mut self, v: f64) -> Self {
        v.to_bits().hash(&mut self.0);
        self
    }

    fn op(mut self, op: &Operator) -> Self {
        op.dim().hash(&mut self.0);
        for z in op.entries().iter() {
            z.re.to_bits().hash(&mut self.0);
            z.im.to_bits().hash(&mut self.0);
        }
        self
    }

    fn obs(self, a: &Observable) -> Self {
        self.op(a.op())
    }

    fn ket(mut self, k: &Ket) -> Self {
        k.dim().hash(&mut self.0);
        for z in k.amplitudes().iter() {
            z.re.to_bits().hash(&mut self.0);
            z.im.to_bits().hash(&mut self.0);
        }
        self
    }

    fn family(mut self, f: &MeasurementFamily) -> Self {
        f.len().hash(&mut self.0);
        let mut out = self;
        for (m, op) in f.outcomes() {
            out = out.f64(*m).op(op);
        }
        out
    }

    fn joint(mut self, j: &JointFamily) -> Self {
        j.len().hash(&mut self.0);
        let mut out = self;
        for ((a, b), op) in j.outcomes() {
            out = out.f64(*a).f64(*b).op(op);
        }
        out
    }

    fn finish(self) -> String {
        format!("{:016x}", self.0.finish())
    }
}

// ---------------------------------------------------------------------------
