//! Centralized numerical tolerances.
//!
//! Every validation bound used by constructors and evaluators lives here so
//! that no module carries ad-hoc magic numbers. Defaults distinguish
//! exact-arithmetic checks (1e-10, a few digits of slack over f64 rounding)
//! from checks downstream of an eigensolver (1e-9) and from deliberate
//! hypothesis gates (1e-8).

/// Tolerance record consulted by all validating constructors and checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Ket norm must equal 1 within this bound.
    pub unit_norm: f64,
    /// ‖A − A†‖ bound for hermiticity checks.
    pub hermitian: f64,
    /// ‖U†U − I‖ bound for unitarity checks.
    pub unitary: f64,
    /// Eigenvalues ≥ −psd for positive-semidefiniteness.
    pub psd: f64,
    /// |Tr ρ − 1| bound for density operators.
    pub trace_one: f64,
    /// ‖Σ M†M − I‖ and ‖Σ Π − I‖ completeness bound.
    pub completeness: f64,
    /// ‖E_m E_n − δ_mn E_m‖ bound for spectral projector families.
    pub projector_orthogonality: f64,
    /// ‖Σ m E_m − A‖ reconstruction bound for spectral data.
    pub spectral_reconstruction: f64,
    /// Eigenvalues closer than this are merged into one projector.
    pub degeneracy: f64,
    /// Imaginary part allowed in expectations of hermitian operators.
    pub expectation_imag: f64,
    /// max ‖M_m†M_n‖ (m≠n) bound for the orthogonal-ranges noise formula.
    pub orthogonal_ranges: f64,
    /// Marginal first-moment residual bound for joint unbiasedness gates.
    pub joint_unbiasedness: f64,
    /// Probabilities in [−clamp, 0) are treated as round-off and clamped.
    pub probability_clamp: f64,
    /// Outcome sets below this probability give an indefinite post-state.
    pub zero_probability: f64,
    /// Slack subtracted from inequality margins before declaring failure.
    pub numeric_slack: f64,
    /// State-wise bound for the non-disturbing / noiseless hypothesis gates.
    pub hypothesis: f64,
    /// Residual bound for realization identity checks on dilations.
    pub realization: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        unit_norm: 1e-10,
        hermitian: 1e-10,
        unitary: 1e-10,
        psd: 1e-10,
        trace_one: 1e-10,
        completeness: 1e-10,
        projector_orthogonality: 1e-9,
        spectral_reconstruction: 1e-9,
        degeneracy: 1e-8,
        expectation_imag: 1e-12,
        orthogonal_ranges: 1e-9,
        joint_unbiasedness: 1e-8,
        probability_clamp: 1e-12,
        zero_probability: 1e-12,
        numeric_slack: 1e-9,
        hypothesis: 1e-9,
        realization: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
