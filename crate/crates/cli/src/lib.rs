//! Scenario-driven front end: load named states, observables, and families
//! from JSON, run selected relation checks, run randomized minimum-margin
//! searches, and emit machine-readable reports.
//!
//! Exit-code contract of the binary:
//! - `0` — everything ran and all guaranteed-to-hold relations passed;
//! - `1` — a guaranteed relation failed, which indicates a defect (an
//!   expected Heisenberg-type failure does **not** trip this);
//! - `2` — input problems: unparsable scenario, unresolved names, wrong
//!   argument kinds, dimension mismatches, or gated preconditions.

pub mod report;
pub mod runner;
pub mod scenario;
pub mod search;

pub use report::{CheckRecord, DilationReport, RunReport, SearchRecord};
pub use runner::{dilate_named_family, run_scenario, run_scenario_str};
pub use scenario::{CheckSpec, FamilySource, NamedObject, Scenario, SearchSpec};
pub use search::{SearchOutcome, search_min_margin};

use thiserror::Error;

/// Input-side failures; all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("scenario parse error: {0}")]
    Parse(String),

    #[error("{location}: {message}")]
    Schema { location: String, message: String },

    #[error("{location}: name '{name}' does not resolve")]
    UnresolvedName { location: String, name: String },

    #[error("{location}: expected a {expected}, but '{name}' is a {actual}")]
    WrongKind {
        location: String,
        name: String,
        expected: &'static str,
        actual: &'static str,
    },

    #[error("{location}: {source}")]
    Evaluation {
        location: String,
        #[source]
        source: quncert_core::Error,
    },
}

pub type CliResult<T> = std::result::Result<T, CliError>;
