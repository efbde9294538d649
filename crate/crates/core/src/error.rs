use thiserror::Error;

/// Errors raised across the crate. Variants name the failing condition; the
/// message carries the operation that raised it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: matrix is not normal (symmetry residual {residual:.3e})")]
    NotNormal { op: &'static str, residual: f64 },
    #[error("{op}: no convergence after {iterations} iterations")]
    NoConvergence { op: &'static str, iterations: usize },
    #[error("{op}: function undefined at eigenvalue {at}")]
    DomainError { op: &'static str, at: f64 },
    #[error("{op}: shift hits the spectrum (pivot {pivot:.3e})")]
    SpectrumHit { op: &'static str, pivot: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite entry produced by {op}")]
    NonFinite { op: &'static str },
    #[error("trace weights invalid: {0}")]
    BadWeights(String),
    #[error("basis map is not a permutation: {0}")]
    BadPermutation(String),
    #[error("{op}: operator is not a member of the algebra (residual {residual:.3e})")]
    NotMember { op: &'static str, residual: f64 },
    #[error("partition does not define a subalgebra: {0}")]
    BadPartition(String),
    #[error("reconstruct: eigenvalue {value} exceeds the range bound {bound} by more than the clamp tolerance")]
    ClampExceeded { value: f64, bound: f64 },
    #[error("generator {index} is not affiliated with the algebra (residual {residual:.3e})")]
    NotAffiliated { index: usize, residual: f64 },
    #[error("invalid control: {0}")]
    BadControl(String),
    #[error("quadrature diverged: error estimate grew from {coarse:.3e} to {fine:.3e}")]
    QuadratureDiverged { coarse: f64, fine: f64 },
    #[error("cutoff invalid: {0}")]
    BadCutoff(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
