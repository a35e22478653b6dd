//! Outcome remapping and probe-grid assembly.
//!
//! Data conditioned on a non-Ψ⁻ Bell outcome equal Ψ⁻ data for a substituted
//! input, wire by wire. Substituted inputs need not be standard states
//! (Ψ⁺ turns |+⟩ into |−⟩), so the grid is re-expressed in the standard basis
//! through linearity of the protocol in each input projector.

use num_complex::Complex;

use super::TomoError;
use crate::qla::{solve_linear, CMatrix, RMatrix};
use crate::qstate::{BellOutcome, PureQubit};
use crate::scalar::Real;
use crate::teleportsim::{InputArrangement, OutcomeTuple};

/// Input whose Ψ⁻-conditioned data equal the `outcome`-conditioned data of `input`:
/// Ψ⁻ ↦ (α, β), Ψ⁺ ↦ (−α, β), Φ⁻ ↦ (β, α), Φ⁺ ↦ (−β, α).
pub fn outcome_remap<T: Real>(outcome: BellOutcome, input: &PureQubit<T>) -> PureQubit<T> {
    let (a, b) = (input.alpha(), input.beta());
    match outcome {
        BellOutcome::PsiMinus => *input,
        BellOutcome::PsiPlus => PureQubit::from_parts(-a, b, None),
        BellOutcome::PhiMinus => PureQubit::from_parts(b, a, None),
        BellOutcome::PhiPlus => PureQubit::from_parts(-b, a, None),
    }
}

/// [`outcome_remap`] applied wire by wire.
pub fn remap_arrangement<T: Real>(
    outcomes: &OutcomeTuple,
    arrangement: &InputArrangement<T>,
) -> InputArrangement<T> {
    InputArrangement::new(
        arrangement
            .inputs()
            .iter()
            .zip(outcomes.outcomes())
            .map(|(i, o)| outcome_remap(*o, i))
            .collect(),
    )
}

fn same_ray<T: Real>(a: &PureQubit<T>, b: &PureQubit<T>) -> bool {
    a.overlap(b) >= T::one() - T::lit(1e-12).max(T::epsilon() * T::lit(16.0))
}

/// `[ρ₀₀, ρ₁₁, Re ρ₀₁, Im ρ₀₁]`.
fn bloch_coordinates<T: Real>(q: &PureQubit<T>) -> [T; 4] {
    let p = q.projector();
    [p[(0, 0)].re, p[(1, 1)].re, p[(0, 1)].re, p[(0, 1)].im]
}

/// How the four probes of one wire express the standard projectors.
#[derive(Clone, Debug)]
enum WireMixing<T> {
    /// `standard[s]` is probe `perm[s]` up to a global phase.
    Permutation([usize; 4]),
    /// `|s⟩⟨s| = Σ_j coef[s][j] |ψ_j⟩⟨ψ_j|`.
    General([[T; 4]; 4]),
}

fn wire_mixing<T: Real>(probes: &[PureQubit<T>]) -> Result<WireMixing<T>, TomoError> {
    let standard = crate::qstate::standard_inputs::<T>();
    let mut perm = [usize::MAX; 4];
    for (s, std_state) in standard.iter().enumerate() {
        if let Some(j) = probes.iter().position(|p| same_ray(p, std_state)) {
            perm[s] = j;
        }
    }
    if perm.iter().all(|&j| j != usize::MAX) {
        return Ok(WireMixing::Permutation(perm));
    }
    let columns: Vec<Vec<T>> = probes
        .iter()
        .map(|p| bloch_coordinates(p).to_vec())
        .collect();
    let design = RMatrix::from_columns(4, &columns);
    let mut coef = [[T::zero(); 4]; 4];
    for (s, std_state) in standard.iter().enumerate() {
        let sol = solve_linear(&design, &bloch_coordinates(std_state))
            .map_err(|_| TomoError::IncompleteInputs)?;
        coef[s].copy_from_slice(&sol.x);
    }
    Ok(WireMixing::General(coef))
}

/// Data on a full `4^wires` product grid of probes, re-expressed as the data
/// the standard inputs would have produced under the all-Ψ⁻ outcome.
///
/// `entries` pairs each probe arrangement (before remapping) with its datum.
/// The result is indexed lexicographically in standard-input order, wire 0
/// most significant.
pub(crate) fn standardize_grid<T: Real>(
    entries: &[(InputArrangement<T>, CMatrix<T>)],
    outcomes: &OutcomeTuple,
) -> Result<Vec<CMatrix<T>>, TomoError> {
    let wires = outcomes.wires();
    let cells = 4usize.pow(wires as u32);
    for (arr, _) in entries {
        if arr.wires() != wires {
            return Err(TomoError::WireCount {
                expected: wires,
                got: arr.wires(),
            });
        }
    }
    let effective: Vec<InputArrangement<T>> = entries
        .iter()
        .map(|(arr, _)| remap_arrangement(outcomes, arr))
        .collect();

    // distinct probes per wire, in first-seen order
    let mut probes: Vec<Vec<PureQubit<T>>> = vec![Vec::new(); wires];
    for arr in &effective {
        for (k, q) in arr.inputs().iter().enumerate() {
            if !probes[k].iter().any(|p| same_ray(p, q)) {
                probes[k].push(*q);
            }
        }
    }
    for (wire, set) in probes.iter().enumerate() {
        if set.len() != 4 {
            return Err(TomoError::ProbeCount {
                wire,
                distinct: set.len(),
            });
        }
    }

    let mut grid: Vec<Option<&CMatrix<T>>> = vec![None; cells];
    for (arr, (_, datum)) in effective.iter().zip(entries) {
        let idx = arr.inputs().iter().enumerate().fold(0, |acc, (k, q)| {
            acc * 4
                + probes[k]
                    .iter()
                    .position(|p| same_ray(p, q))
                    .expect("probe registered")
        });
        if grid[idx].replace(datum).is_some() {
            return Err(TomoError::DuplicateInput);
        }
    }
    let grid: Vec<&CMatrix<T>> = grid
        .into_iter()
        .enumerate()
        .map(|(i, g)| g.ok_or(TomoError::MissingInput { cell: i }))
        .collect::<Result<_, _>>()?;

    let mixings: Vec<WireMixing<T>> = probes
        .iter()
        .map(|p| wire_mixing(p))
        .collect::<Result<_, _>>()?;

    let digits = |mut i: usize| {
        let mut d = vec![0usize; wires];
        for k in (0..wires).rev() {
            d[k] = i % 4;
            i /= 4;
        }
        d
    };

    if mixings
        .iter()
        .all(|m| matches!(m, WireMixing::Permutation(_)))
    {
        return Ok((0..cells)
            .map(|s| {
                let idx = digits(s)
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (k, &sk)| match &mixings[k] {
                        WireMixing::Permutation(p) => acc * 4 + p[sk],
                        WireMixing::General(_) => unreachable!(),
                    });
                grid[idx].clone()
            })
            .collect());
    }

    let weight = |k: usize, s: usize, j: usize| -> T {
        match &mixings[k] {
            WireMixing::Permutation(p) => {
                if p[s] == j {
                    T::one()
                } else {
                    T::zero()
                }
            }
            WireMixing::General(c) => c[s][j],
        }
    };
    let (rows, cols) = (grid[0].rows(), grid[0].cols());
    Ok((0..cells)
        .map(|s| {
            let sd = digits(s);
            let mut acc = CMatrix::zeros(rows, cols);
            for (j, datum) in grid.iter().enumerate() {
                let jd = digits(j);
                let w = (0..wires).fold(T::one(), |w, k| w * weight(k, sd[k], jd[k]));
                if w != T::zero() {
                    acc = &acc + &datum.scale(Complex::new(w, T::zero()));
                }
            }
            acc
        })
        .collect())
}
