use crate::transform::Lambda;

/// Errors returned by the fallible entry points of this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("lambda must not be NaN")]
    NanLambda,
    #[error("input must not be NaN")]
    NanInput,
    #[error("cannot parse `{0}` as a lambda (expected a decimal, `inf` or `-inf`)")]
    ParseLambda(String),
    #[error("scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("lambda = {lambda} is not allowed here: {reason}")]
    LambdaOutOfRange { lambda: Lambda, reason: &'static str },
    #[error("the naive closed form is undefined for lambda = {0}")]
    UnsupportedBranch(Lambda),
    #[error("x = {x} is outside the domain: {reason}")]
    Domain { x: f64, reason: &'static str },
    #[error("unknown special case `{0}`")]
    UnknownName(String),
    #[error("at least one observation is required")]
    EmptyObservations,
    #[error("observation {index} is not finite ({value})")]
    NonFiniteObservation { index: usize, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
