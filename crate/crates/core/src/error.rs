use thiserror::Error;

use crate::surface::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows} rows, row of length {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("gram not symmetric ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("intersection matrix of {what} is not negative definite")]
    NotNegativeDefinite { what: String },
    #[error("unknown curve id {0:?}")]
    UnknownCurve(String),
    #[error("class is not nef: {0}")]
    NotNef(String),
    #[error("class is not big: {0}")]
    NotBig(String),
    #[error("curve {0:?} has non-negative self-intersection")]
    NonNegativeSelfIntersection(String),
    #[error("curve {0:?} is not (K+Δ)-negative and no override was given")]
    NotLogNegative(String),
    #[error("surviving curve {0:?} projects to the zero class")]
    DegenerateProjection(String),
    #[error("blow-up would give curve {0:?} negative genus")]
    NegativeGenus(String),
    #[error("no ample class found: {0}")]
    NoAmpleClass(String),
    #[error("inconsistent closed world: {0}")]
    InconsistentClosedWorld(String),
    #[error("no Kodaira split with k <= {0}")]
    KodairaSplitFailed(u32),
    #[error("invalid surface: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidSurface(Vec<Violation>),
    #[error("surface is not Q-factorial; mode (A) unavailable")]
    NotQFactorial,
    #[error("mode (B) violated: contracting {curve:?} produces a non-lc singularity")]
    ModeBViolation { curve: String },
}
