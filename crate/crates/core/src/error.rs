use thiserror::Error;

/// Errors reported by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("evaluation at a pole: {0}")]
    Pole(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("failed to parse polynomial `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
