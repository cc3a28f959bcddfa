use thiserror::Error;

/// Errors raised by the algebra and chain computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A denominator factor vanished at the evaluation point.
    #[error("pole: factor {0} vanishes")]
    Pole(String),

    #[error("repeated point: entries {0} and {1} coincide")]
    RepeatedPoint(usize, usize),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The input lies outside the domain of a formula or field.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("boundary constraint violated: {0}")]
    BoundaryConstraint(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
