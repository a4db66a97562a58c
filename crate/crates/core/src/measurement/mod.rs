//! Measurement-operator families and their derived statistical objects.
//!
//! A family `{(m, M_m)}` of one operator per real outcome label with
//! `Σ M†M = I` determines everything measurable about the measurement: the
//! POM effects `Π_m = M†M`, the discrete instrument `Δ ↦ Σ_{m∈Δ} M ρ M†`,
//! the nonselective channel `T ρ = Σ M ρ M†`, and its Heisenberg-picture
//! dual `T*A = Σ M† A M`.

pub mod joint;

pub use joint::JointFamily;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{C64, DensityOperator, Observable, Operator};
use crate::tol::Tolerances;

/// Finite list of `(label, operator)` outcomes with `Σ M†M = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementFamily {
    dim: usize,
    outcomes: Vec<(f64, Operator)>,
}

impl MeasurementFamily {
    pub fn new(dim: usize, outcomes: Vec<(f64, Operator)>) -> Result<Self> {
        Self::with_tolerances(dim, outcomes, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(
        dim: usize,
        outcomes: Vec<(f64, Operator)>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::DimensionMismatch(
                "a family needs at least one outcome".into(),
            ));
        }
        for (label, op) in &outcomes {
            if !label.is_finite() {
                return Err(Error::DuplicateLabel(*label));
            }
            if op.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "operator for label {label} has dim {} ≠ {dim}",
                    op.dim()
                )));
            }
        }
        for (i, (a, _)) in outcomes.iter().enumerate() {
            if outcomes.iter().skip(i + 1).any(|(b, _)| a == b) {
                return Err(Error::DuplicateLabel(*a));
            }
        }
        let deviation = completeness_deviation(outcomes.iter().map(|(_, m)| m), dim);
        if deviation > tol.completeness {
            return Err(Error::IncompleteFamily { deviation });
        }
        Ok(Self { dim, outcomes })
    }

    /// Projective measurement of an observable: `M_m = E_m` over its
    /// distinct eigenvalues.
    pub fn projective(a: &Observable) -> Self {
        let outcomes = a.outcomes().map(|(m, e)| (m, e.clone())).collect();
        Self::new(a.dim(), outcomes).expect("spectral projectors form a complete family")
    }

    /// Random family: `k` Kraus blocks sliced out of a Haar-random isometry
    /// from `H` into `H ⊗ C^k`, so completeness holds up to round-off.
    /// Labels are sorted Gaussian draws (resampled until well separated).
    pub fn random<R: Rng + ?Sized>(dim: usize, k: usize, rng: &mut R) -> Self {
        assert!(dim >= 1 && k >= 1);
        let big = crate::hilbert::random::random_unitary(dim * k, rng);
        let labels = distinct_sorted_labels(k, rng);
        let mut outcomes = Vec::with_capacity(k);
        for (j, &label) in labels.iter().enumerate() {
            let mut m = ndarray::Array2::<C64>::zeros((dim, dim));
            for i in 0..dim {
                for ip in 0..dim {
                    m[[i, ip]] = big.entries()[[i * k + j, ip]];
                }
            }
            outcomes.push((label, Operator::new(m).unwrap()));
        }
        Self::new(dim, outcomes).expect("isometry slices form a complete family")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[(f64, Operator)] {
        &self.outcomes
    }

    pub fn labels(&self) -> impl Iterator<Item = f64> + '_ {
        self.outcomes.iter().map(|(m, _)| *m)
    }

    pub fn operator_for(&self, label: f64) -> Option<&Operator> {
        self.outcomes
            .iter()
            .find(|(m, _)| *m == label)
            .map(|(_, op)| op)
    }

    /// POM effects `Π_m = M†_m M_m`.
    pub fn pom(&self) -> Pom {
        let effects = self
            .outcomes
            .iter()
            .map(|(m, op)| (*m, &op.adjoint() * op))
            .collect();
        Pom::new(effects).expect("effects of a complete family form a POM")
    }

    /// Nonselective state reduction `T ρ = Σ_m M ρ M†` as a Kraus channel.
    pub fn tpcp_map(&self) -> TpcpMap {
        TpcpMap::new(self.outcomes.iter().map(|(_, op)| op.clone()).collect())
            .expect("family operators are Kraus operators of a channel")
    }

    /// `Pr{x ∈ subset ‖ ρ} = Σ_{m∈subset} Tr[M†M ρ]`, clamped to [0, 1].
    pub fn outcome_probability(&self, subset: &[f64], state: &DensityOperator) -> Result<f64> {
        self.check_state_dim(state)?;
        let tol = Tolerances::DEFAULT;
        let mut p = 0.0;
        for &label in dedup(subset).iter() {
            let m = self
                .operator_for(label)
                .ok_or(Error::UnknownLabel(label))?;
            p += (&(&m.adjoint() * m) * state.op()).trace().re;
        }
        if p < -tol.probability_clamp {
            return Err(Error::NegativeProbability(p));
        }
        Ok(p.clamp(0.0, 1.0))
    }

    /// State reduction on an outcome subset:
    /// `Σ_{m∈subset} M ρ M† / Pr{x ∈ subset ‖ ρ}`.
    pub fn post_state(&self, subset: &[f64], state: &DensityOperator) -> Result<DensityOperator> {
        self.check_state_dim(state)?;
        let tol = Tolerances::DEFAULT;
        let mut acc = Operator::zeros(self.dim);
        for &label in dedup(subset).iter() {
            let m = self
                .operator_for(label)
                .ok_or(Error::UnknownLabel(label))?;
            acc = &acc + &(&(m * state.op()) * &m.adjoint());
        }
        let p = acc.trace().re;
        if p <= tol.zero_probability {
            return Err(Error::ZeroProbability { probability: p });
        }
        DensityOperator::new(acc.scale_re(1.0 / p))
    }

    fn check_state_dim(&self, state: &DensityOperator) -> Result<()> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state dim {} vs family dim {}",
                state.dim(),
                self.dim
            )));
        }
        Ok(())
    }
}

/// Probability operator-valued measure: positive effects summing to identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Pom {
    effects: Vec<(f64, Operator)>,
}

impl Pom {
    pub fn new(effects: Vec<(f64, Operator)>) -> Result<Self> {
        Self::with_tolerances(effects, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(effects: Vec<(f64, Operator)>, tol: &Tolerances) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::DimensionMismatch(
                "a POM needs at least one effect".into(),
            ));
        }
        let dim = effects[0].1.dim();
        for (i, (a, _)) in effects.iter().enumerate() {
            if effects.iter().skip(i + 1).any(|(b, _)| a == b) {
                return Err(Error::DuplicateLabel(*a));
            }
        }
        for (label, e) in &effects {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "effect for label {label} has dim {} ≠ {dim}",
                    e.dim()
                )));
            }
            if !e.is_hermitian(tol.hermitian) {
                return Err(Error::NotHermitian {
                    deviation: e.hermitian_deviation(),
                    tol: tol.hermitian,
                });
            }
            let min = e
                .eigenvalues_hermitian()?
                .first()
                .copied()
                .unwrap_or(0.0);
            if min < -tol.psd {
                return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
            }
        }
        let mut sum = Operator::zeros(dim);
        for (_, e) in &effects {
            sum = &sum + e;
        }
        let deviation = sum.distance(&Operator::identity(dim));
        if deviation > tol.completeness {
            return Err(Error::IncompleteFamily { deviation });
        }
        Ok(Self { effects })
    }

    pub fn dim(&self) -> usize {
        self.effects[0].1.dim()
    }

    pub fn effects(&self) -> &[(f64, Operator)] {
        &self.effects
    }

    /// `Tr[Π_m ρ]` for one label.
    pub fn probability(&self, label: f64, state: &DensityOperator) -> Result<f64> {
        let e = self
            .effects
            .iter()
            .find(|(m, _)| *m == label)
            .map(|(_, e)| e)
            .ok_or(Error::UnknownLabel(label))?;
        Ok((e * state.op()).trace().re.clamp(0.0, 1.0))
    }
}

/// Trace-preserving completely positive map in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct TpcpMap {
    kraus: Vec<Operator>,
}

impl TpcpMap {
    pub fn new(kraus: Vec<Operator>) -> Result<Self> {
        Self::with_tolerances(kraus, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(kraus: Vec<Operator>, tol: &Tolerances) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::DimensionMismatch(
                "a channel needs at least one Kraus operator".into(),
            ));
        }
        let dim = kraus[0].dim();
        if kraus.iter().any(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch(
                "Kraus operators must share one dimension".into(),
            ));
        }
        let deviation = completeness_deviation(kraus.iter(), dim);
        if deviation > tol.completeness {
            return Err(Error::IncompleteFamily { deviation });
        }
        Ok(Self { kraus })
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    /// Schrödinger picture: `T ρ = Σ Λ ρ Λ†`.
    pub fn apply(&self, rho: &Operator) -> Result<Operator> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "input dim {} vs channel dim {}",
                rho.dim(),
                self.dim()
            )));
        }
        let mut acc = Operator::zeros(self.dim());
        for k in &self.kraus {
            acc = &acc + &(&(k * rho) * &k.adjoint());
        }
        Ok(acc)
    }

    /// Heisenberg picture dual: `T*B = Σ Λ† B Λ`; unital.
    pub fn apply_dual(&self, b: &Operator) -> Result<Operator> {
        if b.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "input dim {} vs channel dim {}",
                b.dim(),
                self.dim()
            )));
        }
        let mut acc = Operator::zeros(self.dim());
        for k in &self.kraus {
            acc = &acc + &(&(&k.adjoint() * b) * k);
        }
        Ok(acc)
    }
}

/// Discrete CP instrument induced by a measurement family:
/// `I(Δ) ρ = Σ_{m∈Δ} M ρ M†`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instrument {
    family: MeasurementFamily,
}

impl Instrument {
    pub fn new(family: MeasurementFamily) -> Self {
        Self { family }
    }

    pub fn family(&self) -> &MeasurementFamily {
        &self.family
    }

    /// Unnormalized selective operation `I(Δ)ρ` for `Δ = subset`.
    pub fn apply(&self, subset: &[f64], state: &DensityOperator) -> Result<Operator> {
        self.family.check_state_dim(state)?;
        let mut acc = Operator::zeros(self.family.dim());
        for &label in dedup(subset).iter() {
            let m = self
                .family
                .operator_for(label)
                .ok_or(Error::UnknownLabel(label))?;
            acc = &acc + &(&(m * state.op()) * &m.adjoint());
        }
        Ok(acc)
    }
}

fn completeness_deviation<'a>(ops: impl Iterator<Item = &'a Operator>, dim: usize) -> f64 {
    let mut sum = Operator::zeros(dim);
    for op in ops {
        sum = &sum + &(&op.adjoint() * op);
    }
    sum.distance(&Operator::identity(dim))
}

fn dedup(labels: &[f64]) -> Vec<f64> {
    let mut seen = Vec::with_capacity(labels.len());
    for &l in labels {
        if !seen.contains(&l) {
            seen.push(l);
        }
    }
    seen
}

pub(crate) fn distinct_sorted_labels<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut labels: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        labels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if labels.windows(2).all(|w| w[1] - w[0] > 1e-6) {
            return labels;
        }
    }
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct WireOutcome {
    label: f64,
    matrix: Operator,
}

#[derive(Serialize, Deserialize)]
struct WireFamily {
    dim: usize,
    outcomes: Vec<WireOutcome>,
}

impl Serialize for MeasurementFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireFamily {
            dim: self.dim,
            outcomes: self
                .outcomes
                .iter()
                .map(|(label, matrix)| WireOutcome {
                    label: *label,
                    matrix: matrix.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeasurementFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = WireFamily::deserialize(d)?;
        MeasurementFamily::new(
            wire.dim,
            wire.outcomes
                .into_iter()
                .map(|o| (o.label, o.matrix))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
