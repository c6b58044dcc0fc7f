use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,

    #[error("could not certify a factorization: {0}")]
    Factorization(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid progression: {0}")]
    InvalidProgression(String),

    #[error("point does not lie on the curve")]
    OffCurve,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}
