//! Two-parameter joint measurement families and their marginals.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{C64, Observable, Operator, anticommutator};
use crate::measurement::{Pom, distinct_sorted_labels};
use crate::tol::Tolerances;

/// Finite family `{((a, b), M_{a,b})}` with `Σ M†M = I`, describing a joint
/// measurement with two outcome axes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointFamily {
    dim: usize,
    outcomes: Vec<((f64, f64), Operator)>,
}

impl JointFamily {
    pub fn new(dim: usize, outcomes: Vec<((f64, f64), Operator)>) -> Result<Self> {
        Self::with_tolerances(dim, outcomes, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(
        dim: usize,
        outcomes: Vec<((f64, f64), Operator)>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::DimensionMismatch(
                "a joint family needs at least one outcome".into(),
            ));
        }
        for ((a, b), op) in &outcomes {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::DuplicateLabel(f64::NAN));
            }
            if op.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "operator for label ({a}, {b}) has dim {} ≠ {dim}",
                    op.dim()
                )));
            }
        }
        for (i, (pair, _)) in outcomes.iter().enumerate() {
            if outcomes.iter().skip(i + 1).any(|(other, _)| pair == other) {
                return Err(Error::DuplicateLabel(pair.0));
            }
        }
        let mut sum = Operator::zeros(dim);
        for (_, op) in &outcomes {
            sum = &sum + &(&op.adjoint() * op);
        }
        let deviation = sum.distance(&Operator::identity(dim));
        if deviation > tol.completeness {
            return Err(Error::IncompleteFamily { deviation });
        }
        Ok(Self { dim, outcomes })
    }

    /// Random joint family on a `ka × kb` label grid, sliced out of a
    /// Haar-random isometry like [`super::MeasurementFamily::random`].
    pub fn random<R: Rng + ?Sized>(dim: usize, ka: usize, kb: usize, rng: &mut R) -> Self {
        assert!(dim >= 1 && ka >= 1 && kb >= 1);
        let k = ka * kb;
        let big = crate::hilbert::random::random_unitary(dim * k, rng);
        let a_labels = distinct_sorted_labels(ka, rng);
        let b_labels = distinct_sorted_labels(kb, rng);
        let mut outcomes = Vec::with_capacity(k);
        for (ja, &la) in a_labels.iter().enumerate() {
            for (jb, &lb) in b_labels.iter().enumerate() {
                let j = ja * kb + jb;
                let mut m = ndarray::Array2::<C64>::zeros((dim, dim));
                for i in 0..dim {
                    for ip in 0..dim {
                        m[[i, ip]] = big.entries()[[i * k + j, ip]];
                    }
                }
                outcomes.push(((la, lb), Operator::new(m).unwrap()));
            }
        }
        Self::new(dim, outcomes).expect("isometry slices form a complete joint family")
    }

    /// Jointly unbiased smeared product family for an anticommuting pair of
    /// ±1-spectrum observables.
    ///
    /// Builds unsharp effects `(I ± λA)/2` and `(I ± μB)/2`, forms the
    /// product operators `M = √Π^A √Π^B`, and then rescales the provisional
    /// ±1 labels by the numerically fitted marginal first-moment slope so
    /// that `Σ_a a Π^A_a = A` and `Σ_b b Π^B_b = B` hold exactly up to
    /// round-off.
    pub fn unbiased_unsharp_product(
        a: &Observable,
        b: &Observable,
        lambda: f64,
        mu: f64,
    ) -> Result<Self> {
        let dim = a.dim();
        if b.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "observable dims {} vs {}",
                dim,
                b.dim()
            )));
        }
        if !(0.0..1.0).contains(&lambda) || !(0.0..1.0).contains(&mu) || lambda == 0.0 || mu == 0.0
        {
            return Err(Error::UnsupportedConstruction(
                "sharpness parameters must lie strictly inside (0, 1)".into(),
            ));
        }
        let id = Operator::identity(dim);
        let check_tol = 1e-9;
        if (a.op() * a.op()).distance(&id) > check_tol || (b.op() * b.op()).distance(&id) > check_tol
        {
            return Err(Error::UnsupportedConstruction(
                "observables must square to the identity (±1 spectra)".into(),
            ));
        }
        if anticommutator(a.op(), b.op())?.operator_norm() > check_tol {
            return Err(Error::UnsupportedConstruction(
                "observables must anticommute".into(),
            ));
        }

        let tol = Tolerances::DEFAULT;
        let signs = [-1.0, 1.0];
        let sqrt_a: Vec<Operator> = signs
            .iter()
            .map(|&s| {
                (&id + &a.op().scale_re(s * lambda))
                    .scale_re(0.5)
                    .sqrt_psd(&tol)
            })
            .collect::<Result<_>>()?;
        let sqrt_b: Vec<Operator> = signs
            .iter()
            .map(|&s| {
                (&id + &b.op().scale_re(s * mu))
                    .scale_re(0.5)
                    .sqrt_psd(&tol)
            })
            .collect::<Result<_>>()?;

        let mut provisional = Vec::with_capacity(4);
        for (ia, &sa) in signs.iter().enumerate() {
            for (ib, &sb) in signs.iter().enumerate() {
                provisional.push(((sa, sb), &sqrt_a[ia] * &sqrt_b[ib]));
            }
        }
        let family = Self::new(dim, provisional)?;

        // Fit the marginal first-moment slopes s_A, s_B via a trace
        // least-squares projection onto the targets, then stretch labels.
        let (ma, mb) = family.marginals();
        let slope = |pom: &Pom, target: &Operator| -> Result<f64> {
            let mut moment = Operator::zeros(dim);
            for (l, e) in pom.effects() {
                moment = &moment + &e.scale_re(*l);
            }
            let num = (&target.adjoint() * &moment).trace().re;
            let den = (&target.adjoint() * target).trace().re;
            let s = num / den;
            if s.abs() < 1e-12 {
                return Err(Error::UnsupportedConstruction(
                    "marginal moment slope vanished; sharpness too small".into(),
                ));
            }
            if moment.distance(&target.scale_re(s)) > 1e-9 {
                return Err(Error::UnsupportedConstruction(
                    "marginal moment is not proportional to the target observable".into(),
                ));
            }
            Ok(s)
        };
        let s_a = slope(&ma, a.op())?;
        let s_b = slope(&mb, b.op())?;

        let rescaled = family
            .outcomes
            .into_iter()
            .map(|((la, lb), op)| ((la / s_a, lb / s_b), op))
            .collect();
        Self::new(dim, rescaled)
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

    pub fn outcomes(&self) -> &[((f64, f64), Operator)] {
        &self.outcomes
    }

    /// Marginal POMs: `Π^A_a = Σ_b M†M` and `Π^B_b = Σ_a M†M`.
    pub fn marginals(&self) -> (Pom, Pom) {
        let mut a_labels: Vec<f64> = Vec::new();
        let mut b_labels: Vec<f64> = Vec::new();
        for ((a, b), _) in &self.outcomes {
            if !a_labels.contains(a) {
                a_labels.push(*a);
            }
            if !b_labels.contains(b) {
                b_labels.push(*b);
            }
        }
        a_labels.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b_labels.sort_by(|x, y| x.partial_cmp(y).unwrap());

        let effect_sum = |select: &dyn Fn(&(f64, f64)) -> bool| {
            let mut acc = Operator::zeros(self.dim);
            for (pair, op) in &self.outcomes {
                if select(pair) {
                    acc = &acc + &(&op.adjoint() * op);
                }
            }
            acc
        };
        let a_effects = a_labels
            .iter()
            .map(|&a| (a, effect_sum(&|pair: &(f64, f64)| pair.0 == a)))
            .collect();
        let b_effects = b_labels
            .iter()
            .map(|&b| (b, effect_sum(&|pair: &(f64, f64)| pair.1 == b)))
            .collect();
        (
            Pom::new(a_effects).expect("marginal effects form a POM"),
            Pom::new(b_effects).expect("marginal effects form a POM"),
        )
    }

    /// Residuals `(‖Σ_a a Π^A_a − A‖, ‖Σ_b b Π^B_b − B‖)`; both small means
    /// the family is a jointly unbiased joint measurement of `(A, B)`.
    pub fn unbiasedness_residual(&self, a: &Observable, b: &Observable) -> Result<(f64, f64)> {
        if a.dim() != self.dim || b.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "observable dims {}/{} vs family dim {}",
                a.dim(),
                b.dim(),
                self.dim
            )));
        }
        let (ma, mb) = self.marginals();
        let moment = |pom: &Pom| {
            let mut acc = Operator::zeros(self.dim);
            for (l, e) in pom.effects() {
                acc = &acc + &e.scale_re(*l);
            }
            acc
        };
        Ok((
            moment(&ma).distance(a.op()),
            moment(&mb).distance(b.op()),
        ))
    }
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct WireJointOutcome {
    label: [f64; 2],
    matrix: Operator,
}

#[derive(Serialize, Deserialize)]
struct WireJointFamily {
    dim: usize,
    outcomes: Vec<WireJointOutcome>,
}

impl Serialize for JointFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireJointFamily {
            dim: self.dim,
            outcomes: self
                .outcomes
                .iter()
                .map(|((a, b), matrix)| WireJointOutcome {
                    label: [*a, *b],
                    matrix: matrix.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JointFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = WireJointFamily::deserialize(d)?;
        JointFamily::new(
            wire.dim,
            wire.outcomes
                .into_iter()
                .map(|o| ((o.label[0], o.label[1]), o.matrix))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
