use thiserror::Error;

/// Errors raised by the reasoning engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {value} is outside the unit interval [0, 1]")]
    OutOfRange { value: f64 },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("grid needs at least 2 points, got {0}")]
    InvalidGrid(usize),

    #[error("predicate is not monotone: {0}")]
    MonotonicityViolation(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("invalid parameters for `{name}`: {reason}")]
    InvalidParameters { name: String, reason: String },

    #[error("`{0}` is not tagged as a t-norm")]
    NotATNorm(String),

    #[error("`{0}` is not a disjunctor (annihilator 1 required)")]
    NotADisjunctor(String),

    #[error("`{0}` is not tagged as a copula")]
    NotACopula(String),

    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },

    #[error("condition violated: {0}")]
    ConditionViolated(String),

    #[error("`{0}` is not declared right-continuous in its second argument")]
    NotRightContinuous(String),

    #[error("universe mismatch: expected `{expected}`, found `{found}`")]
    UniverseMismatch { expected: String, found: String },

    #[error("universe `{universe}` has no label `{label}`")]
    UnknownLabel { universe: String, label: String },

    #[error("invalid universe `{name}`: {reason}")]
    InvalidUniverse { name: String, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("bad conclusion scheme {0} (expected 1..=4)")]
    BadScheme(u8),
}

pub type Result<T> = std::result::Result<T, Error>;
