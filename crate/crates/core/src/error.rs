use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an argument does not hold.
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("test function has zero integral; density is undefined")]
    ZeroIntegral,

    #[error("lattice basis is singular or ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    /// Two lattice points of the acceptance strip project to the same physical point.
    #[error("projection is not injective: lattice points {first:?} and {second:?} collide")]
    ProjectionCollision { first: Vec<i64>, second: Vec<i64> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}
