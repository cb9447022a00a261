use serde::{Deserialize, Serialize};

/// Every numerical threshold used by the library, in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max element of |h - h†| accepted as Hermitian.
    pub hermiticity: f64,
    /// Eigenvalues in `[-psd_clamp, 0)` are clamped to zero before square roots.
    pub psd_clamp: f64,
    /// Negative χ eigenvalues down to `-cp_clamp` are treated as zero.
    pub cp_clamp: f64,
    /// χ eigenvalues above this produce a Kraus operator.
    pub kraus_cutoff: f64,
    /// Slack on the contraction bound `‖A‖ ≤ 1`.
    pub contraction: f64,
    /// Completeness tolerance for synthetic Kraus sets.
    pub completeness: f64,
    /// Completeness tolerance for experimental Kraus data files.
    pub completeness_experimental: f64,
    /// Density matrix checks (Hermiticity, trace, positivity).
    pub state: f64,
    /// Relaxed density-matrix check for evolved states.
    pub evolved_state: f64,
    /// Normalization tolerance for pure state vectors.
    pub normalization: f64,
    /// Spectral weights of a mixed state below this are dropped.
    pub spectral_cutoff: f64,
    /// Unitarity check for matrices handed to the gate compiler.
    pub unitarity: f64,
    /// Condition number above which the tomography system is singular.
    pub max_condition: f64,
    /// Frobenius norm below which a matrix counts as zero.
    pub zero_norm: f64,
    /// Jacobi sweep cap.
    pub max_sweeps: usize,
    /// Projected-gradient iteration cap for CPTP tomography.
    pub max_cptp_iterations: usize,
    /// Constraint violation at which the CPTP fit may stop.
    pub cptp_violation: f64,
    /// Relative objective change at which the CPTP fit may stop.
    pub cptp_objective_change: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermiticity: 1e-8,
        psd_clamp: 1e-9,
        cp_clamp: 1e-6,
        kraus_cutoff: 1e-10,
        contraction: 1e-9,
        completeness: 1e-8,
        completeness_experimental: 0.05,
        state: 1e-8,
        evolved_state: 1e-6,
        normalization: 1e-10,
        spectral_cutoff: 1e-12,
        unitarity: 1e-8,
        max_condition: 1e12,
        zero_norm: 1e-12,
        max_sweeps: 1000,
        max_cptp_iterations: 10_000,
        cptp_violation: 1e-10,
        cptp_objective_change: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
