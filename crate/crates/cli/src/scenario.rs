//! Scenario file schema and name resolution.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "objects": {
//!     "psi":  {"kind": "ket", "amplitudes": [[1.0, 0.0], [0.0, 1.0]]},
//!     "zfam": {"kind": "family", "dim": 2, "outcomes": [...]},
//!     "z":    {"builtin": "pauli_z"}
//!   },
//!   "checks": [{"relation": "universal", "args": ["zfam", "z", "x", "psi"]}],
//!   "search": {"relation": "heisenberg_nd", "dim": 2, "samples": 10000,
//!              "seed": 7, "family_source": "projective_random"}
//! }
//! ```
//!
//! Built-in names `pauli_x`, `pauli_y`, `pauli_z` (dim 2 only) and
//! `identity` resolve without being declared; explicit declarations shadow
//! them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use quncert_core::hilbert::{Ket, Observable, Operator, pauli};
use quncert_core::measurement::{JointFamily, MeasurementFamily};
use quncert_core::relations::RelationId;

use crate::{CliError, CliResult};

/// One resolvable object in a scenario's namespace.
#[derive(Debug, Clone)]
pub enum NamedObject {
    Ket(Ket),
    Observable(Observable),
    Family(MeasurementFamily),
    Joint(JointFamily),
}

impl NamedObject {
    pub fn kind(&self) -> &'static str {
        match self {
            NamedObject::Ket(_) => "ket",
            NamedObject::Observable(_) => "observable",
            NamedObject::Family(_) => "family",
            NamedObject::Joint(_) => "joint_family",
        }
    }

    fn dim(&self) -> usize {
        match self {
            NamedObject::Ket(k) => k.dim(),
            NamedObject::Observable(o) => o.dim(),
            NamedObject::Family(f) => f.dim(),
            NamedObject::Joint(j) => j.dim(),
        }
    }
}

/// One relation check: a relation id plus the names of its arguments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckSpec {
    pub relation: RelationId,
    pub args: Vec<String>,
}

/// Family generator used by the randomized search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySource {
    Simple(SimpleSource),
    Fixed { fixed: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimpleSource {
    /// Kraus blocks of a Haar-random isometry.
    Random,
    /// Projective family of a random hermitian observable.
    ProjectiveRandom,
}

impl Default for FamilySource {
    fn default() -> Self {
        FamilySource::Simple(SimpleSource::Random)
    }
}

/// Randomized minimum-margin search request.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchSpec {
    pub relation: RelationId,
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    #[serde(default)]
    pub family_source: FamilySource,
}

/// A parsed and name-resolved scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub dim: usize,
    pub objects: BTreeMap<String, NamedObject>,
    pub checks: Vec<CheckSpec>,
    pub search: Option<SearchSpec>,
}

#[derive(Deserialize)]
struct ScenarioFile {
    dim: usize,
    #[serde(default)]
    objects: BTreeMap<String, Value>,
    #[serde(default)]
    checks: Vec<CheckSpec>,
    #[serde(default)]
    search: Option<SearchSpec>,
}

impl Scenario {
    pub fn parse(text: &str) -> CliResult<Self> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if file.dim == 0 {
            return Err(CliError::Schema {
                location: "dim".into(),
                message: "dimension must be positive".into(),
            });
        }

        let mut objects = builtins(file.dim);
        for (name, value) in &file.objects {
            let location = format!("objects.{name}");
            let obj = parse_object(&location, value)?;
            if obj.dim() != file.dim {
                return Err(CliError::Schema {
                    location,
                    message: format!(
                        "object dim {} does not match scenario dim {}",
                        obj.dim(),
                        file.dim
                    ),
                });
            }
            objects.insert(name.clone(), obj);
        }

        let scenario = Scenario {
            dim: file.dim,
            objects,
            checks: file.checks,
            search: file.search,
        };
        scenario.validate_names()?;
        Ok(scenario)
    }

    pub fn load(path: &std::path::Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn resolve(&self, location: &str, name: &str) -> CliResult<&NamedObject> {
        self.objects
            .get(name)
            .ok_or_else(|| CliError::UnresolvedName {
                location: location.to_string(),
                name: name.to_string(),
            })
    }

    fn validate_names(&self) -> CliResult<()> {
        for (i, check) in self.checks.iter().enumerate() {
            for (j, name) in check.args.iter().enumerate() {
                self.resolve(&format!("checks[{i}].args[{j}]"), name)?;
            }
        }
        if let Some(search) = &self.search {
            if search.samples == 0 {
                return Err(CliError::Schema {
                    location: "search.samples".into(),
                    message: "at least one sample is required".into(),
                });
            }
            if let FamilySource::Fixed { fixed } = &search.family_source {
                match self.resolve("search.family_source", fixed)? {
                    NamedObject::Family(_) => {}
                    other => {
                        return Err(CliError::WrongKind {
                            location: "search.family_source".into(),
                            name: fixed.clone(),
                            expected: "family",
                            actual: other.kind(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn builtins(dim: usize) -> BTreeMap<String, NamedObject> {
    let mut map = BTreeMap::new();
    map.insert(
        "identity".to_string(),
        NamedObject::Observable(
            Observable::from_operator(Operator::identity(dim)).expect("identity decomposes"),
        ),
    );
    if dim == 2 {
        for (name, op) in [
            ("pauli_x", pauli::x()),
            ("pauli_y", pauli::y()),
            ("pauli_z", pauli::z()),
        ] {
            map.insert(
                name.to_string(),
                NamedObject::Observable(
                    Observable::from_operator(op).expect("pauli operators decompose"),
                ),
            );
        }
    }
    map
}

fn parse_object(location: &str, value: &Value) -> CliResult<NamedObject> {
    let schema_err = |message: String| CliError::Schema {
        location: location.to_string(),
        message,
    };

    if let Some(builtin) = value.get("builtin") {
        let name = builtin
            .as_str()
            .ok_or_else(|| schema_err("'builtin' must be a string".into()))?;
        let op = match name {
            "pauli_x" => pauli::x(),
            "pauli_y" => pauli::y(),
            "pauli_z" => pauli::z(),
            "identity" => Operator::identity(2),
            other => return Err(schema_err(format!("unknown builtin '{other}'"))),
        };
        return Ok(NamedObject::Observable(
            Observable::from_operator(op).map_err(|e| schema_err(e.to_string()))?,
        ));
    }

    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema_err("object needs a 'kind' or 'builtin' key".into()))?;

    match kind {
        "ket" => {
            let amplitudes = value
                .get("amplitudes")
                .ok_or_else(|| schema_err("ket needs 'amplitudes'".into()))?;
            let ket: Ket = serde_json::from_value(amplitudes.clone())
                .map_err(|e| schema_err(e.to_string()))?;
            Ok(NamedObject::Ket(ket))
        }
        "observable" => {
            let matrix = value
                .get("matrix")
                .ok_or_else(|| schema_err("observable needs 'matrix'".into()))?;
            let op: Operator =
                serde_json::from_value(matrix.clone()).map_err(|e| schema_err(e.to_string()))?;
            let obs = Observable::from_operator(op).map_err(|e| schema_err(e.to_string()))?;
            Ok(NamedObject::Observable(obs))
        }
        "family" => {
            let family: MeasurementFamily = serde_json::from_value(value.clone())
                .map_err(|e| schema_err(e.to_string()))?;
            Ok(NamedObject::Family(family))
        }
        "joint_family" => {
            let joint: JointFamily = serde_json::from_value(value.clone())
                .map_err(|e| schema_err(e.to_string()))?;
            Ok(NamedObject::Joint(joint))
        }
        other => Err(schema_err(format!("unknown object kind '{other}'"))),
    }
}
