//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by constructors, validation, and the metric/relation
/// evaluators.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand dimensions are incompatible.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A vector with (near-)zero norm cannot be normalized into a state.
    #[error("cannot normalize a zero vector into a state")]
    ZeroVector,

    /// Hermiticity required but violated beyond tolerance.
    #[error("operator is not hermitian (deviation {deviation:.3e} > tol {tol:.1e})")]
    NotHermitian { deviation: f64, tol: f64 },

    /// Unitarity required but violated beyond tolerance.
    #[error("operator is not unitary (deviation {deviation:.3e} > tol {tol:.1e})")]
    NotUnitary { deviation: f64, tol: f64 },

    /// Positive semidefiniteness required but violated beyond tolerance.
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// Density operator trace differs from one beyond tolerance.
    #[error("trace must equal 1 (got {trace:.12})")]
    TraceNotOne { trace: f64 },

    /// Outcome labels of a family must be pairwise distinct.
    #[error("duplicate outcome label {0}")]
    DuplicateLabel(f64),

    /// `Σ M†M = I` violated beyond tolerance.
    #[error("completeness violated: ‖Σ M†M − I‖ = {deviation:.3e}")]
    IncompleteFamily { deviation: f64 },

    /// An outcome subset referenced a label the family does not carry.
    #[error("unknown outcome label {0}")]
    UnknownLabel(f64),

    /// State reduction requested on an outcome set of probability ~0;
    /// the conditional post-measurement state is indefinite.
    #[error("outcome subset has probability {probability:.3e}; post-state is indefinite")]
    ZeroProbability { probability: f64 },

    /// A probability came out more negative than round-off can explain.
    #[error("probability {0:.3e} is negative beyond round-off tolerance")]
    NegativeProbability(f64),

    /// The single-sum noise formula requires mutually orthogonal operator
    /// ranges.
    #[error("measurement operator ranges are not mutually orthogonal (max ‖M_m†M_n‖ = {deviation:.3e})")]
    OrthogonalityViolated { deviation: f64 },

    /// Joint quantities are only defined for jointly unbiased families.
    #[error("joint family is not jointly unbiased (residuals {residual_a:.3e}, {residual_b:.3e})")]
    NotJointlyUnbiased { residual_a: f64, residual_b: f64 },

    /// A dimensionless relation divides by a vanishing standard deviation.
    #[error("standard deviation of {observable} vanishes; dimensionless form undefined")]
    DegenerateSigma { observable: String },

    /// Meter labels do not cover the family labels being checked.
    #[error("label mismatch between meter and family")]
    LabelMismatch,

    /// Spectral data failed to reproduce its operator within tolerance.
    #[error("spectral reconstruction residual {residual:.3e} exceeds tol {tol:.1e}")]
    SpectralReconstruction { residual: f64, tol: f64 },

    /// A requested construction needs eigenvalues ±1 (involution) or an
    /// anticommuting pair and the inputs do not qualify.
    #[error("unsupported construction: {0}")]
    UnsupportedConstruction(String),

    /// Backend linear algebra failure (LAPACK).
    #[error("linear algebra backend error: {0}")]
    Linalg(String),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
