use thiserror::Error;

/// Errors raised by the distance kernels, generators and experiment runs.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {error:e})"
    )]
    NonConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    /// The integrand produced a NaN or infinity at an interior node.
    #[error("non-finite integrand value at x = {0:e}")]
    NonFinite(f64),

    /// A PMF could not be truncated with a certified tail below the target.
    #[error("truncation exceeds {cap} terms while certifying tail mass (bound {bound:e})")]
    Truncation { cap: usize, bound: f64 },

    /// A discrete comparison needs mass where the other PMF was truncated.
    #[error("pmf truncated at {len} terms but the other distribution has mass at n = {index}")]
    TruncationMismatch { len: usize, index: usize },

    /// The mean-difference shortcut was requested for non-dominated CDFs.
    #[error(
        "CDFs cross at n = {first_crossing}; the mean-difference shortcut does not apply, \
         use wasserstein1_discrete instead"
    )]
    DominanceViolated { first_crossing: usize },

    /// Two routes that must agree did not.
    #[error("{what}: {left:e} vs {right:e} (tolerance {tol:e})")]
    Consistency {
        what: String,
        left: f64,
        right: f64,
        tol: f64,
    },

    /// A numeric value strayed from its analytic reference.
    #[error("{what}: deviation {deviation:e} exceeds tolerance {tol:e}")]
    ToleranceExceeded {
        what: String,
        deviation: f64,
        tol: f64,
    },

    /// A malformed experiment specification or state descriptor.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
