//! Noise, disturbance, and uncertainty-relation verification for
//! finite-dimensional quantum measurements.
//!
//! The crate models measurements as finite families of measurement operators
//! `{M_m}` with `Σ M†M = I`, derives their statistical objects (POM effects,
//! instrument, nonselective channel), computes rms noise ε and rms
//! disturbance η together with standard deviations σ, builds explicit
//! unitary ancilla models realizing any family, and evaluates the standard
//! inequality suite (Robertson, Heisenberg-type noise-disturbance,
//! the universally valid three-term relation, and the joint-measurement
//! bounds) as machine-checkable reports.
//!
//! Modules:
//! - [`hilbert`] — dense complex linear algebra: states, operators,
//!   tensor/partial-trace, spectral decompositions, seeded sampling.
//! - [`measurement`] — measurement-operator families, POMs, channels,
//!   instruments, and two-parameter joint families.
//! - [`metrics`] — σ, ε, η and the mean noise/disturbance operators.
//! - [`dilation`] — constructive unitary ancilla models and the
//!   model-side recomputation of ε and η.
//! - [`relations`] — inequality evaluation as `RelationReport` records.

pub mod dilation;
pub mod error;
pub mod hilbert;
pub mod measurement;
pub mod metrics;
pub mod relations;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;
