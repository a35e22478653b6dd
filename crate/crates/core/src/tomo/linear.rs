//! Linear inversion by channel probing.
//!
//! Column `c` of the design matrix is the tilde data produced by Hermitian
//! basis operator `B_c` through the exact protocol map. Basis order: `E_kk`
//! for all `k`, then `E_kl + E_lk` for `k < l` row-major, then
//! `i(E_kl − E_lk)` in the same order. Each arrangement contributes four
//! rows `[b̃₁₁, b̃₂₂, Re b̃₁₂, Im b̃₁₂]`.

use num_complex::Complex;
use rayon::prelude::*;

use super::TomoError;
use crate::qla::{CMatrix, RMatrix};
use crate::scalar::Real;
use crate::teleportsim::{tilde_map, InputArrangement, OutcomeTuple};

fn upper_pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d)
        .flat_map(|k| ((k + 1)..d).map(move |l| (k, l)))
        .collect()
}

fn basis_element<T: Real>(d: usize, pairs: &[(usize, usize)], c: usize) -> CMatrix<T> {
    let one = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let mut m = CMatrix::zeros(d, d);
    if c < d {
        m[(c, c)] = one;
    } else if c < d + pairs.len() {
        let (k, l) = pairs[c - d];
        m[(k, l)] = one;
        m[(l, k)] = one;
    } else {
        let (k, l) = pairs[c - d - pairs.len()];
        m[(k, l)] = i;
        m[(l, k)] = -i;
    }
    m
}

/// The `4^n` Hermitian basis operators for `n` qubits, in design-column order.
pub fn hermitian_basis<T: Real>(n: usize) -> Vec<CMatrix<T>> {
    let d = 1 << n;
    let pairs = upper_pairs(d);
    (0..d * d).map(|c| basis_element(d, &pairs, c)).collect()
}

/// Inverse of the basis expansion: `x = (diag, Re upper, Im upper)`.
pub fn raw_from_coordinates<T: Real>(x: &[T], n: usize) -> CMatrix<T> {
    let d = 1 << n;
    let pairs = upper_pairs(d);
    let p = pairs.len();
    assert_eq!(x.len(), d + 2 * p);
    let mut m = CMatrix::zeros(d, d);
    for k in 0..d {
        m[(k, k)] = Complex::new(x[k], T::zero());
    }
    for (j, &(k, l)) in pairs.iter().enumerate() {
        let v = Complex::new(x[d + j], x[d + p + j]);
        m[(k, l)] = v;
        m[(l, k)] = v.conj();
    }
    m
}

/// `4·|arrangements| × 4^n` design matrix for data conditioned on `outcomes`.
pub fn design_matrix<T: Real>(
    arrangements: &[InputArrangement<T>],
    outcomes: &OutcomeTuple,
    n: usize,
) -> Result<RMatrix<T>, TomoError> {
    let d = 1usize << n;
    let pairs = upper_pairs(d);
    let columns: Vec<Vec<T>> = (0..d * d)
        .into_par_iter()
        .map(|c| {
            let b = basis_element::<T>(d, &pairs, c);
            let mut col = Vec::with_capacity(4 * arrangements.len());
            for arr in arrangements {
                let t = tilde_map(&b, arr, outcomes)?;
                col.extend([t[(0, 0)].re, t[(1, 1)].re, t[(0, 1)].re, t[(0, 1)].im]);
            }
            Ok(col)
        })
        .collect::<Result<_, TomoError>>()?;
    Ok(RMatrix::from_columns(4 * arrangements.len(), &columns))
}
