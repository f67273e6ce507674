//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("Fock cutoff {0} outside the supported range 1..=30")]
    CutoffOutOfRange(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("coupling J = {j} gamma is at or below the locus threshold gamma/4")]
    BelowThreshold { j: f64 },

    #[error("phase condition denominator vanishes at this (phi, Delta, J)")]
    SingularPhasePoint,

    #[error("amplitude equations are resonant (singular linear system)")]
    Resonance,

    #[error("J = {0} gamma sits on the dark-state boundary J = gamma/2")]
    DarkStateBoundary(f64),

    #[error("steady-state system is degenerate after trace replacement")]
    DegenerateSteadyState,

    #[error("sparse LU factorization failed: {0}")]
    Factorization(String),

    #[error("steady-state residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("integrator failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
