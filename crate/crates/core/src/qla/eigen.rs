use num_complex::Complex;

use super::{CMatrix, QlaError};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `m = V diag(values) V†`, values ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V diag(f(λ)) V†`.
    pub fn reassemble_with(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        let weights: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |r, c| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (k, &w) in weights.iter().enumerate() {
                if w != T::zero() {
                    acc += v[(r, k)] * v[(c, k)].conj() * w;
                }
            }
            acc
        })
    }

    pub fn reassemble(&self) -> CMatrix<T> {
        self.reassemble_with(|l| l)
    }
}

fn off_diagonal_norm_sqr<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for r in 0..n {
        for c in (r + 1)..n {
            s += a[(r, c)].norm_sqr();
        }
    }
    s + s
}

/// Cyclic complex Jacobi eigendecomposition of a Hermitian matrix.
///
/// Input must be Hermitian to within [`Real::HERMITIAN_TOL`]; its Hermitian part
/// is decomposed.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> Result<HermitianEigen<T>, QlaError> {
    if !m.is_square() {
        return Err(QlaError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dev = m.hermitian_deviation();
    if !(dev <= T::lit(T::HERMITIAN_TOL)) {
        return Err(QlaError::NotHermitian {
            deviation: dev.to_f64_lossy(),
        });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)].im = T::zero();
    }
    let mut v = CMatrix::<T>::identity(n);
    let total = a.frobenius_norm();
    let threshold = T::epsilon() * T::epsilon() * total * total;

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sqr(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm_sqr(&a) > threshold {
        return Err(QlaError::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi rotation zeroing `a[p][q]`: `A ← U† A U`, `V ← V U` with
/// `U = diag(1, e^{-iφ}) · [[c, s], [-s, c]]` on the (p, q) plane.
fn rotate<T: Real>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == T::zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // skip rotations that would be lost in rounding anyway
    if b <= T::epsilon() * T::epsilon() * (app.abs() + aqq.abs()) {
        a[(p, q)] = Complex::new(T::zero(), T::zero());
        a[(q, p)] = Complex::new(T::zero(), T::zero());
        return;
    }
    let phase = apq / b;
    let tau = (aqq - app) / (b + b);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    let cc = Complex::new(c, T::zero());
    let ss = Complex::new(s, T::zero());
    let ph_conj = phase.conj();
    let u_pp = cc;
    let u_pq = ss;
    let u_qp = -ss * ph_conj;
    let u_qq = cc * ph_conj;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::new(T::zero(), T::zero());
    a[(q, p)] = Complex::new(T::zero(), T::zero());
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}
