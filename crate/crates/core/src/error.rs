use thiserror::Error;

/// Errors raised by the exact-arithmetic pipeline and its front ends.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("invalid family key: {0}")]
    InvalidKey(String),

    #[error("division by the zero {0}")]
    DivisionByZero(&'static str),

    #[error("rational function has a pole at z = {0}")]
    Pole(String),

    #[error("expected a polynomial, but the division leaves a nonzero remainder")]
    NotPolynomial,

    #[error("degenerate deformation: 1 + t*R vanishes identically at step {step}")]
    DegenerateParameter { step: usize },

    #[error("parameters are inadmissible: tau has a zero on [-1, 1]")]
    Inadmissible,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
