use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A design field or solver setting violates its constraint.
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// The solver produced a NaN or infinity.
    #[error("solver diverged at iteration {iteration}: {what}")]
    Diverged { iteration: usize, what: String },

    /// Reference evaluators refuse problem sizes they were not built for.
    #[error("size guard: {0}")]
    Guard(String),

    #[error("shape mismatch: {0}")]
    Shape(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field,
            reason: reason.into(),
        }
    }
}
