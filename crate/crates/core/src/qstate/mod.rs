//! Quantum-state domain layer: density matrices, probe inputs, Bell basis,
//! random states and distances.

mod bell;
mod density;
mod input;
mod random;

pub use bell::{bell_projector, BellOutcome};
pub use density::{frobenius_distance, trace_distance, Density};
pub use input::{standard_inputs, InputLabel, PureQubit};
pub use random::{random_density, MAX_RANDOM_QUBITS};

use thiserror::Error;

use crate::qla::QlaError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error(transparent)]
    Qla(#[from] QlaError),
    #[error("dimension {0} is not a power of two ≥ 2")]
    NotQubitDimension(usize),
    #[error("not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace}, expected 1")]
    Trace { trace: f64 },
    #[error("not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("input amplitudes have norm² {norm}, expected 1")]
    NotNormalized { norm: f64 },
    #[error("rank {rank} invalid for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },
    #[error("{qubits} qubits unsupported (1..={max})")]
    InvalidQubits { qubits: usize, max: usize },
    #[error("qubit counts differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
}
