use thiserror::Error;

/// Errors raised by the geometric and numerical layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular (pivot {pivot:e})")]
    Singular { pivot: f64 },

    #[error("matrix is not skew-symmetric (asymmetry {asymmetry:e})")]
    NotSkew { asymmetry: f64 },

    #[error("metric is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("unknown Weil polynomial `{0}`")]
    UnknownWeil(String),

    #[error("total form degree {degree} exceeds space dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },

    #[error("jet point is not the 1-jet of the given metric (deviation {deviation:e})")]
    OffHolonomic { deviation: f64 },

    #[error("diffeomorphism is not orientation preserving (det {det:e})")]
    NotOrientationPreserving { det: f64 },

    #[error("fixed-point inversion did not converge after {iterations} iterations")]
    InverseDidNotConverge { iterations: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
