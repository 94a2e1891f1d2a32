use thiserror::Error;

use crate::multi_index::MultiIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("derivative order must be nonnegative, got {0}")]
    NegativeDerivativeOrder(MultiIndex),

    #[error("cannot evaluate a negative power of zero in coordinate {axis}")]
    ZeroToNegativePower { axis: usize },

    #[error("substitution matrix must be {expected}x{expected}")]
    NonSquareMatrix { expected: usize },

    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("root-of-unity order must be at least 2, got {0}")]
    InvalidOrder(usize),

    #[error("dilation must satisfy |m| >= 2, got {0}")]
    InvalidDilation(i64),

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("{coset} is not a coset representative for |m| = {modulus}")]
    InvalidCoset { coset: MultiIndex, modulus: u64 },

    #[error("direction matrix has rank {rank}, need {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("malformed direction matrix: {0}")]
    MalformedMatrix(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("invalid rational `{0}`")]
    BadRational(String),

    #[error("trusted region is empty; enlarge the data box (radius)")]
    EmptyTrustedBox,

    #[error("cascade level {requested} exceeds guard {max}")]
    CascadeTooDeep { requested: u32, max: u32 },

    #[error("invalid box: lower bound exceeds upper bound on axis {axis}")]
    InvalidBox { axis: usize },
}
