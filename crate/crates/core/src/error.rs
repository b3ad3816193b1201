use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain a function is defined (or implemented) on.
    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// The detector setup violates one of its invariants.
    #[error("invalid detector setup: {0}")]
    InvalidSetup(String),

    /// A geometry-dependent operation was handed the flat-space sentinel.
    #[error("{0} requires a finite AdS radius; use the minkowski_* operations for flat space")]
    MinkowskiSentinel(&'static str),

    /// An iterative evaluation did not meet its tolerance within the work cap.
    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    /// Inputs are outside the regime in which a formula is valid.
    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
