use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("polynomial is not divisible by the linear form")]
    NotDivisible,
    #[error("a reflection needs a nonzero vector")]
    ZeroVector,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid root system ({0} violation(s))")]
    InvalidRootSystem(usize),
    #[error("reflection group order exceeds cap {0}")]
    GroupCapExceeded(usize),
    #[error("linear system is singular")]
    Singular,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("degree {degree} exceeds table limit {max}")]
    DegreeExceedsTable { degree: usize, max: usize },
    #[error("tolerance {tol:e} not reached; best sup error {achieved:e} at degree {degree}")]
    ToleranceUnreachable { tol: f64, achieved: f64, degree: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("quadrature: {0}")]
    Quadrature(String),
    #[error("basis is numerically rank deficient (pivot {0:e})")]
    RankDeficient(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
