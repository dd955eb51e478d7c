use crate::loopalg::Degree;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid B presentation: {0}")]
    InvalidPresentation(String),
    #[error("operands use different B presentations")]
    PresentationMismatch,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("operation requires rank 1, ambient rank is {0}")]
    RankNotOne(usize),
    #[error("element is zero")]
    ZeroElement,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("invalid dominant weight: {0}")]
    InvalidWeight(String),
    #[error("dimension cap exceeded: {what} = {value} > {cap}")]
    DimensionCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("construction produced dimension {found}, Weyl formula gives {expected}")]
    ConstructionMismatch { expected: usize, found: usize },
    #[error("degree {0} lies outside the window")]
    OutOfWindow(Degree),
    #[error("degree {0} is not among the requested destination slices")]
    OutsideDestination(Degree),
    #[error("support too close to the window boundary at degree {0}")]
    InteriorViolation(Degree),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
