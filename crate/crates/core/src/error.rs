use thiserror::Error;

/// Errors reported by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be nonnegative, got {value}")]
    Negative { what: &'static str, value: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("{op} requires {requirement}, but the constant term is {found}")]
    ConstantTerm {
        op: &'static str,
        requirement: &'static str,
        found: String,
    },

    #[error("requested size {requested} exceeds the configured limit {limit}")]
    LimitExceeded { requested: u64, limit: u64 },

    #[error("key bits exhausted at depth {0}")]
    KeyExhausted(usize),

    #[error("{0} did not converge")]
    NoConvergence(String),

    #[error(
        "estimated truncation error {estimate:e} exceeds tolerance {tol:e}; retry with T >= {suggested_height}"
    )]
    Truncation {
        estimate: f64,
        tol: f64,
        suggested_height: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
