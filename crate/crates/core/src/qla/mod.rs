//! Dense complex linear algebra for small matrices.
//!
//! Tensor-factor ordering convention: subsystem 0 is the most significant
//! factor, so `tensor(a, b)` indexes rows as `a_row * b.rows() + b_row`.

mod eigen;
mod linsolve;
mod matrix;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use linsolve::{
    condition_number, singular_threshold, singular_values, solve_linear, LinearSolution, RMatrix,
};
pub use matrix::{partial_trace, permute_subsystems, tensor, tensor_all, CMatrix, MAX_DIM};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QlaError {
    #[error("matrix has no entries")]
    Empty,
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension {rows}x{cols} exceeds the supported maximum {max}")]
    DimensionOverflow {
        rows: usize,
        cols: usize,
        max: usize,
    },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("subsystem dims {dims:?} do not multiply to {size}")]
    DimsMismatch { dims: Vec<usize>, size: usize },
    #[error("no subsystems kept")]
    EmptyKeep,
    #[error("subsystem {index} out of range for {count} subsystems")]
    InvalidSubsystem { index: usize, count: usize },
    #[error("invalid subsystem permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("linear system is singular to tolerance (condition {condition:e})")]
    Singular { condition: f64 },
    #[error("eigendecomposition did not converge")]
    NoConvergence,
}
