use thiserror::Error;

use crate::exactlin::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("form is not positive definite: pivot {index} is {pivot}")]
    NotPositiveDefinite { index: usize, pivot: Rational },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {n} is not supported here (supported: {min}..={max})")]
    UnsupportedDimension { n: usize, min: usize, max: usize },

    #[error("transform is not unimodular (determinant {det})")]
    NotUnimodular { det: Rational },

    #[error("vectors are linearly dependent (rank {rank} < {expected})")]
    LinearlyDependent { rank: usize, expected: usize },

    #[error("vector system is not primitive")]
    NotPrimitive,

    #[error("partial system already spans the lattice ({k} of {n} vectors)")]
    NothingToExtend { k: usize, n: usize },

    #[error("form is not Minkowski-reduced: {0}")]
    NotReduced(String),

    #[error("bound must be positive, got {0}")]
    NonPositiveBound(Rational),

    #[error("LLL parameter delta must satisfy 1/4 < delta <= 1, got {0}")]
    InvalidDelta(Rational),

    #[error("coordinate does not fit in a 64-bit integer")]
    CoordinateOverflow,

    #[error("iteration cap {cap} exceeded: {trace}")]
    IterationCap { cap: usize, trace: String },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown lattice name `{0}`")]
    UnknownLattice(String),
}
