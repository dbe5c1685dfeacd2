use thiserror::Error;

/// Errors produced by the model.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation argument violates its domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The Bloch integrator could not continue (step-size underflow).
    #[error("integration failed at t = {time_reached:.3e} s: {reason}")]
    IntegrationFailure { time_reached: f64, reason: String },

    /// An efficiency map does not extend far enough for the requested average.
    #[error("efficiency map covers r <= {available:.3e} m but {required:.3e} m is needed")]
    InsufficientCoverage { required: f64, available: f64 },

    /// A bounded search found no interior optimum.
    #[error("optimization failed: {0}")]
    OptimizationDomain(String),

    /// A fit problem is degenerate or did not converge.
    #[error("fit failed: {0}")]
    FitDomain(String),

    /// A model error annotated with the sweep grid point that produced it.
    #[error("sweep of `{parameter}` failed at value {value:.6e}: {source}")]
    Sweep {
        parameter: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
