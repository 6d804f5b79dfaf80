use thiserror::Error;

use crate::model::{JordanPair, SignedIndex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("singular matrix: zero diagonal at {}", fmt_labels(.zero_positions))]
    SingularMatrix { zero_positions: Vec<SignedIndex> },

    #[error("singular matrix: pivot {pivot} vanishes")]
    SingularPivot { pivot: usize },

    #[error("matrix is not diagonalizable: Jordan pairs {}", fmt_pairs(.pairs))]
    NonDiagonalizable { pairs: Vec<JordanPair> },

    #[error("zig-zag eigenproblem not diagonalizable at c indices {offending:?} (1-based)")]
    ZigZagNonDiagonalizable { offending: Vec<usize> },

    #[error("invalid weight: kappa^2 at position {index} is {value}, must be finite and > 0")]
    InvalidWeight { index: usize, value: f64 },

    #[error("matrix is not symmetric: |A[{row},{col}] - A[{col},{row}]| = {gap:e}")]
    Asymmetric { row: usize, col: usize, gap: f64 },

    #[error("coupling pattern too wide for zig-zag form: n({i},{j}) present (1-based)")]
    PatternTooWide { i: usize, j: usize },

    #[error("dimension {dim} exceeds oracle cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("impossible generator constraints: {0}")]
    Generator(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn fmt_labels(labels: &[SignedIndex]) -> String {
    labels
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn fmt_pairs(pairs: &[JordanPair]) -> String {
    pairs
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}
