//! Quantum state tomography by teleportation.
//!
//! A shared `n`-qubit state is probed by teleporting known single-qubit inputs
//! through its first `n − 1` qubits with Bell measurements; Bob's conditional
//! states on the last qubit determine the whole state. The crate simulates the
//! protocol exactly or with finite shots and inverts the resulting data.
//!
//! - [`qla`], dense complex linear algebra
//! - [`qstate`], density matrices, inputs, Bell basis
//! - [`teleportsim`], protocol simulator
//! - [`tomo`], reconstruction
//! - [`expcli`], experiment orchestration behind the binary
//!
//! Numeric code is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix `f64`.

// `!(x > tol)` rejects NaN along with small values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod expcli;
pub mod qla;
pub mod qstate;
pub mod scalar;
pub mod teleportsim;
pub mod tomo;

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type ComplexMatrix = qla::CMatrix<f64>;
pub type DensityMatrix = qstate::Density<f64>;
pub type InputState = qstate::PureQubit<f64>;
pub type TildeRecord = teleportsim::Tilde<f64>;
pub type ReconstructionReport = tomo::Reconstruction<f64>;
