//! Experiment orchestration behind the `teletomo` binary.
//!
//! Every command is a library function so it can be driven from tests; the
//! binary only parses flags, prints, and maps errors to exit codes.

mod commands;
mod files;

pub use commands::{
    cmd_convergence, cmd_gen, cmd_reconstruct, cmd_simulate, cmd_verify, reconstruct_designated,
    simulate_records, ConvergenceRow, Metrics, StateSource,
};
pub use files::{
    read_records, read_state, write_json, ExperimentConfig, InputSpec, Mode, Provenance,
    ReconstructionFile, RecordEntry, RecordFile, StateFile, RECONSTRUCTION_FORMAT, RECORDS_FORMAT,
    STATE_FORMAT,
};

use std::path::PathBuf;

use thiserror::Error;

use crate::qstate::StateError;
use crate::teleportsim::SimError;
use crate::tomo::TomoError;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const INSUFFICIENT_DATA: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Tomo(#[from] TomoError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io { .. } | Self::Format { .. } | Self::State(_) => exit::USAGE,
            Self::Sim(e) => sim_code(e),
            Self::Tomo(e) => match e {
                TomoError::RecordCount { .. }
                | TomoError::ProbeCount { .. }
                | TomoError::DuplicateInput
                | TomoError::MissingInput { .. }
                | TomoError::IncompleteInputs
                | TomoError::NoRecords => exit::INSUFFICIENT_DATA,
                TomoError::Singular { .. }
                | TomoError::Degenerate
                | TomoError::NotHermitian { .. }
                | TomoError::Qla(_) => exit::NUMERICAL,
                TomoError::Sim(s) => sim_code(s),
                _ => exit::USAGE,
            },
        }
    }
}

fn sim_code(e: &SimError) -> i32 {
    match e {
        SimError::InsufficientData { .. } => exit::INSUFFICIENT_DATA,
        SimError::Qla(_) => exit::NUMERICAL,
        _ => exit::USAGE,
    }
}
