//! Machine-readable run reports.
//!
//! Margins appear three ways: as native JSON numbers (lossless via the
//! shortest-roundtrip encoder), as display strings with 12 significant
//! digits, and as the raw IEEE-754 bit pattern in hex for binary-exact
//! auditing.

use serde::{Deserialize, Serialize};

use quncert_core::dilation::MeasuringProcess;
use quncert_core::hilbert::{Ket, Operator};
use quncert_core::measurement::{JointFamily, MeasurementFamily};
use quncert_core::relations::{RelationId, RelationReport};

use crate::scenario::FamilySource;

/// Twelve-significant-digit decimal rendering.
pub fn display_12(v: f64) -> String {
    format!("{v:.11e}")
}

/// Binary-exact IEEE-754 bit pattern.
pub fn hex_bits(v: f64) -> String {
    format!("0x{:016x}", v.to_bits())
}

/// One evaluated check from a scenario's `checks` list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub relation: RelationId,
    pub args: Vec<String>,
    pub report: RelationReport,
    pub margin_display: String,
    pub margin_hex: String,
}

impl CheckRecord {
    pub fn new(args: Vec<String>, report: RelationReport) -> Self {
        Self {
            relation: report.relation_id,
            args,
            margin_display: display_12(report.margin),
            margin_hex: hex_bits(report.margin),
            report,
        }
    }
}

/// The minimizing sample of a search, serialized in full so it can be
/// replayed through the library.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArgminRecord {
    pub sample_index: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<MeasurementFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint_family: Option<JointFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Operator>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Operator>,
    pub psi: Ket,
    pub report: RelationReport,
}

/// Aggregated result of a randomized minimum-margin search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchRecord {
    pub relation: RelationId,
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    pub family_source: FamilySource,
    pub evaluated: u64,
    pub violation_count: u64,
    pub min_margin: f64,
    pub min_margin_display: String,
    pub min_margin_hex: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin: Option<ArgminRecord>,
}

/// Full output of one scenario run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Wall-clock stamp; excluded from the determinism contract and absent
    /// from library-level runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at_unix_ms: Option<u64>,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchRecord>,
}

impl RunReport {
    pub fn new(checks: Vec<CheckRecord>, search: Option<SearchRecord>) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: search.as_ref().map(|s| s.seed),
            generated_at_unix_ms: None,
            checks,
            search,
        }
    }

    pub fn stamped(mut self) -> Self {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        self.generated_at_unix_ms = Some(now);
        self
    }

    /// True when every guaranteed relation that applied passed; a false
    /// answer is the binary's exit-1 defect signal.
    pub fn guaranteed_all_pass(&self) -> bool {
        let check_ok = self.checks.iter().all(|c| {
            !c.report.relation_id.guaranteed() || !c.report.applicable || c.report.pass
        });
        let search_ok = self.search.as_ref().is_none_or(|s| {
            !s.relation.guaranteed() || s.violation_count == 0
        });
        check_ok && search_ok
    }
}

/// Output of the `dilate` subcommand: the explicit measuring process for a
/// named family plus its realization-identity residual.
#[derive(Debug, Clone, Serialize)]
pub struct DilationReport {
    pub family: String,
    pub system_dim: usize,
    pub ancilla_dim: usize,
    pub realization_residual: f64,
    pub residual_display: String,
    pub process: MeasuringProcess,
}
