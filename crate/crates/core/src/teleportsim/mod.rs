//! Exact and sampled simulation of Bell-measurement teleportation through an
//! unknown shared state.
//!
//! The shared state has `n` qubits; qubits `1..n-1` are Alice's wires and
//! qubit `n` is Bob's. Alice teleports one known input per wire, so the joint
//! system has `2n − 1` qubits, held in the canonical order
//! `[A₁, 1, A₂, 2, …, A_{n−1}, n−1, n]`. Bob's correction unitaries are the
//! identity throughout.
//!
//! Two routes compute Bob's unnormalized state. The dense route builds the
//! joint density matrix and the multi-wire projector explicitly
//! ([`joint_state`], [`bm_projector`], [`bob_unnormalized`]). The effect route
//! ([`tilde_map`]) folds each wire's input and Bell projector into a 2×2
//! effect `E = Tr_A[(ρ_A ⊗ 1) P]` acting on the shared qubit, giving
//! `tilde = Tr_{1..n−1}[ρ (E₁ ⊗ … ⊗ E_{n−1} ⊗ 1)]` without the joint space.

mod sampling;

pub use sampling::{
    estimate_from_frequencies, estimate_records, sample_shots, sample_tally, ShotRecord, ShotTally,
    TallyFrequencies, BOB_PROBE_SCHEDULE,
};

use num_complex::Complex;
use thiserror::Error;

use crate::qla::{partial_trace, permute_subsystems, tensor_all, CMatrix, QlaError};
use crate::qstate::{BellOutcome, Density, InputLabel, PureQubit, StateError};
use crate::scalar::Real;

/// Outcomes at or below this probability cannot be conditioned on.
pub const MIN_CONDITIONING_PROBABILITY: f64 = 1e-12;

/// Largest shared-state size the simulator accepts.
pub const MAX_SHARED_QUBITS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Qla(#[from] QlaError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("expected {expected} wires, got {got}")]
    WireCount { expected: usize, got: usize },
    #[error("shared state must have 2..={max} qubits, got {qubits}")]
    UnsupportedSize { qubits: usize, max: usize },
    #[error("joint matrix of dimension {0} is not a (2n−1)-qubit system")]
    JointDimension(usize),
    #[error("outcome probability {q:e} is too small to condition on")]
    ImprobableOutcome { q: f64 },
    #[error("shots_per_probe must be at least 1")]
    NoShots,
    #[error("no shots for arrangement {arrangement}, designated outcome, probe {probe}")]
    InsufficientData {
        arrangement: usize,
        probe: InputLabel,
    },
    #[error("operator of dimension {dim} does not act on {wires} wires plus Bob")]
    OperatorSize { dim: usize, wires: usize },
    #[error("arrangement index {0} out of range")]
    UnknownArrangement(usize),
}

/// The `n − 1` inputs Alice teleports; wire `k` goes through shared qubit `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct InputArrangement<T> {
    inputs: Vec<PureQubit<T>>,
}

impl<T: Real> InputArrangement<T> {
    pub fn new(inputs: Vec<PureQubit<T>>) -> Self {
        Self { inputs }
    }

    pub fn inputs(&self) -> &[PureQubit<T>] {
        &self.inputs
    }

    pub fn wires(&self) -> usize {
        self.inputs.len()
    }

    /// Every arrangement of `wires` inputs drawn from `set`, lexicographic in
    /// the order of `set` with wire 0 most significant.
    pub fn enumerate(set: &[PureQubit<T>], wires: usize) -> Vec<Self> {
        let mut out = vec![Vec::new()];
        for _ in 0..wires {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<PureQubit<T>>| {
                    set.iter().map(move |s| {
                        let mut v = prefix.clone();
                        v.push(*s);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(Self::new).collect()
    }
}

/// Alice's Bell-measurement result on each wire.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeTuple(pub Vec<BellOutcome>);

impl OutcomeTuple {
    pub fn uniform(outcome: BellOutcome, wires: usize) -> Self {
        Self(vec![outcome; wires])
    }

    pub fn wires(&self) -> usize {
        self.0.len()
    }

    pub fn outcomes(&self) -> &[BellOutcome] {
        &self.0
    }

    /// All `4^wires` tuples, lexicographic with wire 0 most significant.
    pub fn enumerate(wires: usize) -> Vec<Self> {
        (0..4usize.pow(wires as u32))
            .map(|i| Self::from_index(i, wires))
            .collect()
    }

    pub fn from_index(mut index: usize, wires: usize) -> Self {
        let mut v = vec![BellOutcome::PsiMinus; wires];
        for k in (0..wires).rev() {
            v[k] = BellOutcome::ALL[index % 4];
            index /= 4;
        }
        Self(v)
    }

    /// Position in [`OutcomeTuple::enumerate`] order.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, o| acc * 4 + o.index())
    }
}

/// Bob's unnormalized conditional state for one (arrangement, outcome) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Tilde<T> {
    pub arrangement: InputArrangement<T>,
    pub outcome: OutcomeTuple,
    /// Probability of `outcome`; equals `Tr(tilde)` for exact records.
    pub q: T,
    /// 2×2 Hermitian `[[b̃₁₁, b̃₁₂], [b̃₁₂*, b̃₂₂]]`.
    pub tilde: CMatrix<T>,
    /// Shot count behind a sampled estimate; `None` for exact records.
    pub shots: Option<u64>,
}

fn check_shared_size(qubits: usize) -> Result<(), SimError> {
    if !(2..=MAX_SHARED_QUBITS).contains(&qubits) {
        return Err(SimError::UnsupportedSize {
            qubits,
            max: MAX_SHARED_QUBITS,
        });
    }
    Ok(())
}

fn check_wires(expected: usize, got: usize) -> Result<(), SimError> {
    if expected != got {
        return Err(SimError::WireCount { expected, got });
    }
    Ok(())
}

/// Subsystem order taking `[A₁ … A_w, 1 … w, n]` to the canonical interleaving.
pub fn canonical_order(wires: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(2 * wires + 1);
    for k in 0..wires {
        order.push(k);
        order.push(wires + k);
    }
    order.push(2 * wires);
    order
}

/// Joint density matrix of the inputs and the shared state in canonical order.
pub fn joint_state<T: Real>(
    arrangement: &InputArrangement<T>,
    shared: &Density<T>,
) -> Result<CMatrix<T>, SimError> {
    let n = shared.qubits();
    check_shared_size(n)?;
    let wires = n - 1;
    check_wires(wires, arrangement.wires())?;
    let projectors: Vec<CMatrix<T>> = arrangement.inputs().iter().map(|i| i.projector()).collect();
    let mut blocks: Vec<&CMatrix<T>> = projectors.iter().collect();
    blocks.push(shared.matrix());
    let product = tensor_all(blocks)?;
    let dims = vec![2; 2 * wires + 1];
    Ok(permute_subsystems(
        &product,
        &dims,
        &canonical_order(wires),
    )?)
}

/// `P₁ ⊗ … ⊗ P_{n−1} ⊗ 1` in canonical order.
pub fn bm_projector<T: Real>(
    outcomes: &OutcomeTuple,
    qubits: usize,
) -> Result<CMatrix<T>, SimError> {
    check_shared_size(qubits)?;
    check_wires(qubits - 1, outcomes.wires())?;
    let projectors: Vec<CMatrix<T>> = outcomes.outcomes().iter().map(|o| o.projector()).collect();
    let id = CMatrix::identity(2);
    let mut blocks: Vec<&CMatrix<T>> = projectors.iter().collect();
    blocks.push(&id);
    Ok(tensor_all(blocks)?)
}

fn joint_qubits<T: Real>(joint: &CMatrix<T>) -> Result<usize, SimError> {
    let d = joint.rows();
    if !joint.is_square() || !d.is_power_of_two() {
        return Err(SimError::JointDimension(d));
    }
    let total = d.trailing_zeros() as usize;
    if total < 3 || total.is_multiple_of(2) {
        return Err(SimError::JointDimension(d));
    }
    Ok(total.div_ceil(2))
}

fn clamp_probability<T: Real>(q: T) -> T {
    q.max(T::zero()).min(T::one())
}

/// `Tr(P ρ)`, clamped to `[0, 1]`.
pub fn bm_probability<T: Real>(joint: &CMatrix<T>, outcomes: &OutcomeTuple) -> Result<T, SimError> {
    let n = joint_qubits(joint)?;
    let p = bm_projector::<T>(outcomes, n)?;
    Ok(clamp_probability(p.trace_of_product(joint).re))
}

/// `Tr_{Alice}[P ρ P]`.
pub fn bob_unnormalized<T: Real>(
    joint: &CMatrix<T>,
    outcomes: &OutcomeTuple,
) -> Result<CMatrix<T>, SimError> {
    let n = joint_qubits(joint)?;
    let p = bm_projector::<T>(outcomes, n)?;
    let projected = p.matmul(joint).matmul(&p);
    let total = 2 * n - 1;
    Ok(partial_trace(&projected, &vec![2; total], &[total - 1])?)
}

/// Bob's conditional state `Tr_{Alice}[P ρ P] / Q`.
pub fn bob_normalized<T: Real>(
    joint: &CMatrix<T>,
    outcomes: &OutcomeTuple,
) -> Result<Density<T>, SimError> {
    let tilde = bob_unnormalized(joint, outcomes)?;
    normalize_tilde(&tilde)
}

fn normalize_tilde<T: Real>(tilde: &CMatrix<T>) -> Result<Density<T>, SimError> {
    let q = tilde.trace().re;
    if !(q > T::lit(MIN_CONDITIONING_PROBABILITY)) {
        return Err(SimError::ImprobableOutcome {
            q: q.to_f64_lossy(),
        });
    }
    Ok(Density::new(
        tilde.scale_real(T::one() / q).hermitian_part(),
    )?)
}

/// 2×2 effect `E = Tr_A[(ρ_A ⊗ 1) P_o]` of teleporting `input` with outcome
/// `outcome`, as an operator on the shared qubit of that wire.
pub fn wire_effect<T: Real>(input: &PureQubit<T>, outcome: BellOutcome) -> CMatrix<T> {
    let rho_a = input.projector();
    let p = outcome.projector::<T>();
    CMatrix::from_fn(2, 2, |a, b| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for s in 0..2 {
            for t in 0..2 {
                acc += rho_a[(s, t)] * p[(2 * t + a, 2 * s + b)];
            }
        }
        acc
    })
}

/// Effect-route linear map `op ↦ Tr_{1..n−1}[op (E₁ ⊗ … ⊗ E_{n−1} ⊗ 1)]`.
///
/// `op` is any operator on the shared qubits (Bob's qubit last); it need not be
/// a state, which is what lets the reconstruction engine probe the map with a
/// Hermitian operator basis.
pub fn tilde_map<T: Real>(
    op: &CMatrix<T>,
    arrangement: &InputArrangement<T>,
    outcomes: &OutcomeTuple,
) -> Result<CMatrix<T>, SimError> {
    let wires = arrangement.wires();
    check_wires(wires, outcomes.wires())?;
    if op.rows() != 1 << (wires + 1) || !op.is_square() {
        return Err(SimError::OperatorSize {
            dim: op.rows(),
            wires,
        });
    }
    let effects: Vec<CMatrix<T>> = arrangement
        .inputs()
        .iter()
        .zip(outcomes.outcomes())
        .map(|(i, o)| wire_effect(i, *o))
        .collect();
    let w = if effects.is_empty() {
        CMatrix::identity(1)
    } else {
        tensor_all(effects.iter())?
    };
    Ok(contract_with_effect(op, &w))
}

/// `tilde_{ij} = Σ_{x,z} op[(x,i),(z,j)] · W[z,x]`.
fn contract_with_effect<T: Real>(op: &CMatrix<T>, w: &CMatrix<T>) -> CMatrix<T> {
    let d = w.rows();
    let mut out = CMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex::new(T::zero(), T::zero());
            for x in 0..d {
                for z in 0..d {
                    let wzx = w[(z, x)];
                    if wzx.re == T::zero() && wzx.im == T::zero() {
                        continue;
                    }
                    acc += op[(2 * x + i, 2 * z + j)] * wzx;
                }
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Exact record for one arrangement and outcome tuple.
pub fn exact_record<T: Real>(
    shared: &Density<T>,
    arrangement: &InputArrangement<T>,
    outcomes: &OutcomeTuple,
) -> Result<Tilde<T>, SimError> {
    check_shared_size(shared.qubits())?;
    check_wires(shared.qubits() - 1, arrangement.wires())?;
    let tilde = tilde_map(shared.matrix(), arrangement, outcomes)?.hermitian_part();
    let q = clamp_probability(tilde.trace().re);
    Ok(Tilde {
        arrangement: arrangement.clone(),
        outcome: outcomes.clone(),
        q,
        tilde,
        shots: None,
    })
}

/// Exact records for every outcome tuple of one arrangement.
pub fn outcome_table<T: Real>(
    shared: &Density<T>,
    arrangement: &InputArrangement<T>,
) -> Result<Vec<Tilde<T>>, SimError> {
    OutcomeTuple::enumerate(arrangement.wires())
        .iter()
        .map(|o| exact_record(shared, arrangement, o))
        .collect()
}

/// Bob's normalized state via the effect route.
pub fn bob_state<T: Real>(
    shared: &Density<T>,
    arrangement: &InputArrangement<T>,
    outcomes: &OutcomeTuple,
) -> Result<Density<T>, SimError> {
    let rec = exact_record(shared, arrangement, outcomes)?;
    normalize_tilde(&rec.tilde)
}

#[cfg(test)]
mod tests;
