//! Randomized minimum-margin search.
//!
//! Sample `i` draws everything from an independent RNG stream derived from
//! `(seed, i)`, so the set of evaluated tuples is a pure function of the
//! seed; serial and parallel execution aggregate identically because the
//! minimum is taken lexicographically over `(margin, sample index)`.

use rand::Rng;
use quncert_core::hilbert::random::ChaCha8Rng;
use rayon::prelude::*;

use quncert_core::hilbert::random::{derived_stream, haar_random_ket, random_observable};
use quncert_core::hilbert::{Ket, Observable, Operator, pauli, random, tensor};
use quncert_core::measurement::{JointFamily, MeasurementFamily};
use quncert_core::relations::{self, RelationId, RelationReport};
use quncert_core::tol::Tolerances;

use crate::report::{ArgminRecord, SearchRecord, display_12, hex_bits};
use crate::scenario::{FamilySource, SearchSpec, SimpleSource};
use crate::{CliError, CliResult};

/// Outcome of a search: the aggregated record, ready for a report.
pub type SearchOutcome = SearchRecord;

struct SampledInputs {
    family: Option<MeasurementFamily>,
    joint: Option<JointFamily>,
    a: Observable,
    b: Observable,
    psi: Ket,
}

fn needs_joint(relation: RelationId) -> bool {
    matches!(
        relation,
        RelationId::ArthursGoodman | RelationId::IshikawaOzawa | RelationId::JointNoiseProduct
    )
}

fn needs_family(relation: RelationId) -> bool {
    !matches!(relation, RelationId::Robertson) && !needs_joint(relation)
}

fn sample_inputs(
    relation: RelationId,
    dim: usize,
    source: &FamilySource,
    fixed: Option<&MeasurementFamily>,
    rng: &mut ChaCha8Rng,
) -> CliResult<SampledInputs> {
    let a = random_observable(dim, rng);
    let b = random_observable(dim, rng);
    let psi = haar_random_ket(dim, rng);

    if needs_joint(relation) {
        if !dim.is_multiple_of(2) {
            return Err(CliError::Schema {
                location: "search.dim".into(),
                message: "joint-relation search needs an even dimension".into(),
            });
        }
        // anticommuting ±1 pair: Haar-conjugated Z⊗I and X⊗I
        let half = dim / 2;
        let u = random::random_unitary(dim, rng);
        let conj = |op: &Operator| &(&u * op) * &u.adjoint();
        let base_a = tensor(&pauli::z(), &Operator::identity(half));
        let base_b = tensor(&pauli::x(), &Operator::identity(half));
        let a_obs = Observable::from_operator(conj(&base_a))
            .map_err(|e| sample_err("conjugated involution", e))?;
        let b_obs = Observable::from_operator(conj(&base_b))
            .map_err(|e| sample_err("conjugated involution", e))?;
        let lambda = rng.random_range(0.3..0.9);
        let mu = rng.random_range(0.3..0.9);
        let joint = JointFamily::unbiased_unsharp_product(&a_obs, &b_obs, lambda, mu)
            .map_err(|e| sample_err("unsharp product family", e))?;
        return Ok(SampledInputs {
            family: None,
            joint: Some(joint),
            a: a_obs,
            b: b_obs,
            psi,
        });
    }

    let family = if needs_family(relation) {
        Some(match source {
            FamilySource::Fixed { .. } => fixed
                .expect("fixed family resolved by the caller")
                .clone(),
            FamilySource::Simple(SimpleSource::Random) => {
                let k = rng.random_range(1..=6);
                MeasurementFamily::random(dim, k, rng)
            }
            FamilySource::Simple(SimpleSource::ProjectiveRandom) => {
                MeasurementFamily::projective(&random_observable(dim, rng))
            }
        })
    } else {
        None
    };

    Ok(SampledInputs {
        family,
        joint: None,
        a,
        b,
        psi,
    })
}

fn sample_err(what: &str, e: quncert_core::Error) -> CliError {
    CliError::Evaluation {
        location: format!("search ({what})"),
        source: e,
    }
}

/// Evaluates one sampled tuple; `Ok(None)` means the relation did not apply
/// (vanishing σ for the dimensionless form, failed hypothesis gates).
fn evaluate(
    relation: RelationId,
    inputs: &SampledInputs,
) -> CliResult<Option<RelationReport>> {
    use quncert_core::Error as CoreError;
    let fam = || inputs.family.as_ref().expect("family sampled");
    let joint = || inputs.joint.as_ref().expect("joint family sampled");
    let result = match relation {
        RelationId::Robertson => relations::robertson(&inputs.a, &inputs.b, &inputs.psi),
        RelationId::HeisenbergNd => {
            relations::heisenberg_nd(fam(), &inputs.a, &inputs.b, &inputs.psi)
        }
        RelationId::Universal => relations::universal(fam(), &inputs.a, &inputs.b, &inputs.psi),
        RelationId::UniversalDimensionless => {
            match relations::universal_dimensionless(fam(), &inputs.a, &inputs.b, &inputs.psi) {
                Err(CoreError::DegenerateSigma { .. }) => return Ok(None),
                other => other,
            }
        }
        RelationId::NoiseCorrectedProduct => {
            relations::corrected_noise_disturbance(fam(), &inputs.a, &inputs.b, &inputs.psi)
        }
        RelationId::DisturbanceBound => {
            relations::disturbance_bound(fam(), inputs.b.op(), &inputs.psi)
        }
        RelationId::NonDisturbing => relations::gated_checks(fam(), &inputs.a, &inputs.b, &inputs.psi)
            .map(|(ndm, _)| ndm),
        RelationId::Noiseless => relations::gated_checks(fam(), &inputs.a, &inputs.b, &inputs.psi)
            .map(|(_, nlm)| nlm),
        RelationId::ArthursGoodman => {
            relations::arthurs_goodman(joint(), &inputs.a, &inputs.b, &inputs.psi)
        }
        RelationId::IshikawaOzawa => {
            relations::ishikawa_ozawa(joint(), &inputs.a, &inputs.b, &inputs.psi)
        }
        RelationId::JointNoiseProduct => {
            relations::joint_noise_product(joint(), &inputs.a, &inputs.b, &inputs.psi)
        }
    };
    let report = result.map_err(|e| sample_err(relation.wire_name(), e))?;
    Ok(report.applicable.then_some(report))
}

#[derive(Clone, Copy)]
struct SampleSummary {
    index: u64,
    margin: f64,
    violation: bool,
}

fn run_sample(
    spec: &SearchSpec,
    fixed: Option<&MeasurementFamily>,
    index: u64,
) -> CliResult<Option<SampleSummary>> {
    let mut rng = derived_stream(spec.seed, index + 1);
    let inputs = sample_inputs(spec.relation, spec.dim, &spec.family_source, fixed, &mut rng)?;
    Ok(evaluate(spec.relation, &inputs)?.map(|report| SampleSummary {
        index,
        margin: report.margin,
        violation: !report.pass,
    }))
}

/// Runs the search described by `spec`. `fixed` must be the resolved family
/// when the source is `{"fixed": name}`. With `parallel` the samples fan out
/// over a thread pool; the aggregate is identical to the serial run.
pub fn search_min_margin(
    spec: &SearchSpec,
    fixed: Option<&MeasurementFamily>,
    parallel: bool,
) -> CliResult<SearchRecord> {
    if spec.samples == 0 {
        return Err(CliError::Schema {
            location: "search.samples".into(),
            message: "at least one sample is required".into(),
        });
    }
    if let Some(f) = fixed {
        if f.dim() != spec.dim {
            return Err(CliError::Schema {
                location: "search.family_source".into(),
                message: format!(
                    "fixed family dim {} does not match search dim {}",
                    f.dim(),
                    spec.dim
                ),
            });
        }
    }

    let summaries: Vec<Option<SampleSummary>> = if parallel {
        (0..spec.samples)
            .into_par_iter()
            .map(|i| run_sample(spec, fixed, i))
            .collect::<CliResult<_>>()?
    } else {
        (0..spec.samples)
            .map(|i| run_sample(spec, fixed, i))
            .collect::<CliResult<_>>()?
    };

    let mut evaluated = 0u64;
    let mut violations = 0u64;
    let mut best: Option<SampleSummary> = None;
    for s in summaries.into_iter().flatten() {
        evaluated += 1;
        if s.violation {
            violations += 1;
        }
        let better = match best {
            None => true,
            Some(b) => (s.margin, s.index) < (b.margin, b.index),
        };
        if better {
            best = Some(s);
        }
    }
    let best = best.ok_or_else(|| CliError::Schema {
        location: "search".into(),
        message: "no sample satisfied the relation's applicability gate".into(),
    })?;

    // Re-derive the minimizing tuple for the report.
    let mut rng = derived_stream(spec.seed, best.index + 1);
    let inputs = sample_inputs(spec.relation, spec.dim, &spec.family_source, fixed, &mut rng)?;
    let report = evaluate(spec.relation, &inputs)?
        .expect("argmin sample was applicable on the first pass");
    debug_assert!((report.margin - best.margin).abs() <= Tolerances::DEFAULT.numeric_slack);
    let argmin = ArgminRecord {
        sample_index: best.index,
        family: inputs.family,
        joint_family: inputs.joint,
        a: Some(inputs.a.op().clone()),
        b: Some(inputs.b.op().clone()),
        psi: inputs.psi,
        report,
    };

    Ok(SearchRecord {
        relation: spec.relation,
        dim: spec.dim,
        samples: spec.samples,
        seed: spec.seed,
        family_source: spec.family_source.clone(),
        evaluated,
        violation_count: violations,
        min_margin: best.margin,
        min_margin_display: display_12(best.margin),
        min_margin_hex: hex_bits(best.margin),
        argmin: Some(argmin),
    })
}
