//! Reconstruction of the shared state from teleportation data.
//!
//! Closed forms cover one, two and three qubits; the linear solver covers
//! two to five. Closed forms need Ψ⁻-conditioned data on the standard inputs;
//! other outcomes and other four-state input sets are mapped onto that case
//! first (see [`outcome_remap`]). The linear solver works directly on any
//! outcome tuple and any arrangement set, failing if the set is not
//! informationally complete.

mod closed_form;
mod linear;
mod project;
mod remap;

pub use closed_form::{single_qubit_raw, three_qubit_raw, two_qubit_raw};
pub use linear::{design_matrix, hermitian_basis, raw_from_coordinates};
pub use project::{project_physical, Projection};
pub use remap::{outcome_remap, remap_arrangement};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qla::{condition_number, CMatrix, QlaError, RMatrix};
use crate::qstate::{standard_inputs, BellOutcome, Density, PureQubit, StateError};
use crate::scalar::Real;
use crate::teleportsim::{wire_effect, InputArrangement, OutcomeTuple, SimError, Tilde};

/// Largest tilde Hermitian deviation accepted (sized for sampled data).
pub const TILDE_HERMITIAN_TOL: f64 = 1e-6;

/// Largest shared state the linear solver handles.
pub const MAX_LINEAR_QUBITS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TomoError {
    #[error(transparent)]
    Qla(QlaError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("expected {expected} wires, got {got}")]
    WireCount { expected: usize, got: usize },
    #[error("expected {expected} records, got {got}")]
    RecordCount { expected: usize, got: usize },
    #[error("wire {wire} has {distinct} distinct probes, need 4")]
    ProbeCount { wire: usize, distinct: usize },
    #[error("two records share an input arrangement")]
    DuplicateInput,
    #[error("no record for grid cell {cell}")]
    MissingInput { cell: usize },
    #[error("input set does not span the qubit operators")]
    IncompleteInputs,
    #[error("records are conditioned on different outcome tuples")]
    MixedOutcomes,
    #[error("no records")]
    NoRecords,
    #[error("tilde not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("estimate has no positive eigenvalue")]
    Degenerate,
    #[error("{method:?} does not handle {qubits} qubits")]
    UnsupportedSize { qubits: usize, method: Method },
    #[error("design matrix is singular (condition {condition:e})")]
    Singular { condition: f64 },
}

impl From<QlaError> for TomoError {
    fn from(e: QlaError) -> Self {
        match e {
            QlaError::Singular { condition } => Self::Singular { condition },
            other => Self::Qla(other),
        }
    }
}

/// Inversion used for a reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm1,
    ClosedForm2,
    ClosedForm3,
    LinearN,
}

/// Method selection for [`reconstruct_records`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MethodChoice {
    /// Closed form up to three qubits, linear beyond.
    #[default]
    Auto,
    Closed,
    Linear,
}

/// Outcome of one reconstruction.
#[derive(Clone, Debug)]
pub struct Reconstruction<T> {
    /// Physical estimate.
    pub rho_hat: Density<T>,
    /// Hermitian estimate before projection; its trace is not forced to 1.
    pub raw: CMatrix<T>,
    /// `‖A x − y‖₂` of the linear system; 0 for closed forms.
    pub residual: T,
    /// `σ_max / σ_min` of the design matrix of the data actually inverted.
    /// Closed forms report the matrix of the Ψ⁻, standard-input system.
    pub condition: T,
    pub method: Method,
    /// Whether [`project_physical`] had to alter `raw`.
    pub projected: bool,
}

fn check_tilde<T: Real>(m: &CMatrix<T>) -> Result<(), TomoError> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(QlaError::Shape {
            expected: 4,
            got: m.rows() * m.cols(),
        }
        .into());
    }
    let deviation = m.hermitian_deviation().to_f64_lossy();
    if !(deviation <= TILDE_HERMITIAN_TOL) {
        return Err(TomoError::NotHermitian { deviation });
    }
    Ok(())
}

fn finish<T: Real>(
    raw: CMatrix<T>,
    residual: T,
    condition: T,
    method: Method,
) -> Result<Reconstruction<T>, TomoError> {
    let p = project_physical(&raw)?;
    Ok(Reconstruction {
        rho_hat: p.state,
        raw,
        residual,
        condition,
        method,
        projected: p.projected,
    })
}

/// Condition of the Ψ⁻, standard-input system for `qubits`.
fn standard_condition<T: Real>(qubits: usize) -> Result<T, TomoError> {
    if qubits == 1 {
        let basis = hermitian_basis::<T>(1);
        let columns: Vec<Vec<T>> = basis
            .iter()
            .map(|b| {
                standard_inputs::<T>()
                    .iter()
                    .map(|p| {
                        b.trace_of_product(&wire_effect(p, BellOutcome::PsiMinus))
                            .re
                    })
                    .collect()
            })
            .collect();
        return Ok(condition_number(&RMatrix::from_columns(4, &columns)));
    }
    let arrangements = InputArrangement::enumerate(&standard_inputs::<T>(), qubits - 1);
    let psi = OutcomeTuple::uniform(BellOutcome::PsiMinus, qubits - 1);
    Ok(condition_number(&design_matrix(
        &arrangements,
        &psi,
        qubits,
    )?))
}

/// Single-qubit state from Ψ⁻ probabilities of Bob's Bell measurement against
/// four probe states.
pub fn reconstruct_1q<T: Real>(
    q_by_probe: &[(PureQubit<T>, T)],
) -> Result<Reconstruction<T>, TomoError> {
    let entries: Vec<(InputArrangement<T>, CMatrix<T>)> = q_by_probe
        .iter()
        .map(|(p, q)| {
            (
                InputArrangement::new(vec![*p]),
                CMatrix::from_fn(1, 1, |_, _| Complex::new(*q, T::zero())),
            )
        })
        .collect();
    let psi = OutcomeTuple::uniform(BellOutcome::PsiMinus, 1);
    let grid = remap::standardize_grid(&entries, &psi)?;
    let q = [
        grid[0][(0, 0)].re,
        grid[1][(0, 0)].re,
        grid[2][(0, 0)].re,
        grid[3][(0, 0)].re,
    ];
    finish(
        single_qubit_raw(&q),
        T::zero(),
        standard_condition(1)?,
        Method::ClosedForm1,
    )
}

fn closed_grid<T: Real>(
    entries: &[(InputArrangement<T>, CMatrix<T>)],
    outcomes: &OutcomeTuple,
) -> Result<Vec<CMatrix<T>>, TomoError> {
    for (_, t) in entries {
        check_tilde(t)?;
    }
    remap::standardize_grid(entries, outcomes)
}

/// Two-qubit closed form. `tilde_by_input` holds one record per probe input,
/// all conditioned on `outcome`.
pub fn reconstruct_2q<T: Real>(
    tilde_by_input: &[(InputArrangement<T>, CMatrix<T>)],
    outcome: BellOutcome,
) -> Result<Reconstruction<T>, TomoError> {
    let grid = closed_grid(tilde_by_input, &OutcomeTuple::uniform(outcome, 1))?;
    finish(
        two_qubit_raw(&grid),
        T::zero(),
        standard_condition(2)?,
        Method::ClosedForm2,
    )
}

/// Three-qubit closed form over the 16 input pairs, all conditioned on
/// `outcomes`.
pub fn reconstruct_3q<T: Real>(
    tilde_by_pair: &[(InputArrangement<T>, CMatrix<T>)],
    outcomes: &OutcomeTuple,
) -> Result<Reconstruction<T>, TomoError> {
    if outcomes.wires() != 2 {
        return Err(TomoError::WireCount {
            expected: 2,
            got: outcomes.wires(),
        });
    }
    let grid = closed_grid(tilde_by_pair, outcomes)?;
    finish(
        three_qubit_raw(&grid),
        T::zero(),
        standard_condition(3)?,
        Method::ClosedForm3,
    )
}

/// Linear inversion for `n` qubits from `4^{n−1}` records conditioned on
/// `outcomes`.
pub fn reconstruct_nq<T: Real>(
    tilde_by_arrangement: &[(InputArrangement<T>, CMatrix<T>)],
    outcomes: &OutcomeTuple,
    n: usize,
) -> Result<Reconstruction<T>, TomoError> {
    if !(2..=MAX_LINEAR_QUBITS).contains(&n) {
        return Err(TomoError::UnsupportedSize {
            qubits: n,
            method: Method::LinearN,
        });
    }
    if outcomes.wires() != n - 1 {
        return Err(TomoError::WireCount {
            expected: n - 1,
            got: outcomes.wires(),
        });
    }
    let expected = 4usize.pow(n as u32 - 1);
    if tilde_by_arrangement.len() != expected {
        return Err(TomoError::RecordCount {
            expected,
            got: tilde_by_arrangement.len(),
        });
    }
    let mut arrangements = Vec::with_capacity(expected);
    let mut y = Vec::with_capacity(4 * expected);
    for (arr, t) in tilde_by_arrangement {
        check_tilde(t)?;
        arrangements.push(arr.clone());
        y.extend([t[(0, 0)].re, t[(1, 1)].re, t[(0, 1)].re, t[(0, 1)].im]);
    }
    let a = design_matrix(&arrangements, outcomes, n)?;
    let sol = crate::qla::solve_linear(&a, &y)?;
    finish(
        raw_from_coordinates(&sol.x, n),
        sol.residual,
        sol.condition,
        Method::LinearN,
    )
}

/// Reconstruction from a set of records sharing one outcome tuple. The
/// shared state has one qubit more than the records have wires.
pub fn reconstruct_records<T: Real>(
    records: &[Tilde<T>],
    choice: MethodChoice,
) -> Result<Reconstruction<T>, TomoError> {
    let first = records.first().ok_or(TomoError::NoRecords)?;
    let outcomes = first.outcome.clone();
    if records.iter().any(|r| r.outcome != outcomes) {
        return Err(TomoError::MixedOutcomes);
    }
    let n = outcomes.wires() + 1;
    let entries: Vec<(InputArrangement<T>, CMatrix<T>)> = records
        .iter()
        .map(|r| (r.arrangement.clone(), r.tilde.clone()))
        .collect();
    let closed = match choice {
        MethodChoice::Auto => n <= 3,
        MethodChoice::Closed => true,
        MethodChoice::Linear => false,
    };
    match (closed, n) {
        (true, 2) => reconstruct_2q(&entries, outcomes.0[0]),
        (true, 3) => reconstruct_3q(&entries, &outcomes),
        (true, _) => Err(TomoError::UnsupportedSize {
            qubits: n,
            method: Method::ClosedForm3,
        }),
        (false, _) => reconstruct_nq(&entries, &outcomes, n),
    }
}
