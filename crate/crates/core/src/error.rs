use thiserror::Error;

/// Errors raised by the modeling routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-physical parameter: {0}")]
    NonPhysical(String),

    #[error("effective junction vanishes, transmon regime violated (phi_ext = {phi_ext} rad)")]
    JunctionCollapse { phi_ext: f64 },

    #[error("xi = {xi} outside the transmon regime (require xi < {limit})")]
    XiOutOfRange { xi: f64, limit: f64 },

    #[error("Fock dimension {dim} too small: {reason}")]
    DimensionTooSmall { dim: usize, reason: String },

    #[error("product Fock dimension {dim} exceeds the {limit} limit")]
    DimensionOverflow { dim: usize, limit: usize },

    #[error("eigensolver failed to converge: {0}")]
    EigenConvergence(String),

    #[error("dispersive formula singular: {0}")]
    DispersiveSingular(String),

    #[error("near-resonant, dispersive labeling invalid (max overlap {overlap:.3} <= 0.5)")]
    AmbiguousLabeling { overlap: f64 },

    #[error("aliasing guard failure: grid size {grid} below 8 x k_max = {required}")]
    AliasingGuard { grid: usize, required: usize },

    #[error("harmonic series did not converge after {terms} terms (tail estimate {tail:.3e})")]
    HarmonicNonConvergence { terms: usize, tail: f64 },

    #[error("transition not reachable at this amplitude: required omega_p = {omega_p} MHz")]
    TransitionNotReachable { omega_p: f64 },

    #[error("integration step {step} us too large (limit {limit} us)")]
    StepTooLarge { step: f64, limit: f64 },

    #[error("state norm drifted by {drift:.3e} (limit {limit:.1e}); reduce the step")]
    NormDrift { drift: f64, limit: f64 },

    #[error("invalid series data: {0}")]
    SeriesFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
