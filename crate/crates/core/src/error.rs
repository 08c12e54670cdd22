use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter is outside its allowed domain.
    #[error("invalid parameter `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    #[error("problem dimension {dim} exceeds the configured maximum {max}")]
    Resource { dim: usize, max: usize },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("eigensolver did not converge after {iterations} iterations ({converged}/{requested} pairs converged, worst residual {worst_residual:.3e})")]
    NotConverged {
        iterations: usize,
        converged: usize,
        requested: usize,
        worst_residual: f64,
        /// Ritz values at termination, ascending, in GHz.
        partial_eigenvalues: Vec<f64>,
        partial_residuals: Vec<f64>,
    },

    #[error("near-resonant pair (l={l}, l'={lp}): |Delta| = {delta:.3e} GHz")]
    Resonance { l: usize, lp: usize, delta: f64 },

    #[error("duplicate dressed-state label (l={l}, n={n}) claimed by states {states:?}")]
    DuplicateLabel { l: usize, n: usize, states: Vec<usize> },

    #[error("sweep aborted: {failed} of {total} points failed")]
    SweepAborted { failed: usize, total: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain { field, reason: reason.into() }
    }
}
