use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is not inside the domain (margin {margin:e})")]
    OutsideDomain { margin: f64 },

    #[error("point is not on the boundary (distance {distance:e} exceeds tolerance {tol:e})")]
    NotOnBoundary { distance: f64, tol: f64 },

    #[error("non-finite coordinate in point")]
    NonFinite,

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not implemented for this domain: {0}")]
    NotImplemented(String),

    #[error("map left the domain at step {step} (margin {margin:e})")]
    NumericEscape { step: usize, margin: f64 },

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
