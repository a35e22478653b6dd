use std::ops::{Index, IndexMut};

use super::QlaError;
use crate::scalar::Real;

/// Dense real matrix, row-major. Used for the design matrices of linear inversion.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> RMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| *a * *b)
                    .sum()
            })
            .collect()
    }
}

impl<T> Index<(usize, usize)> for RMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for RMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

fn norm2<T: Real>(v: &[T]) -> T {
    v.iter().map(|x| *x * *x).sum::<T>().sqrt()
}

/// Singular values, descending, by one-sided (Hestenes) Jacobi on the columns.
pub fn singular_values<T: Real>(a: &RMatrix<T>) -> Vec<T> {
    let (m, n) = (a.rows, a.cols);
    let mut cols: Vec<Vec<T>> = (0..n)
        .map(|c| (0..m).map(|r| a[(r, c)]).collect())
        .collect();
    let tol = T::epsilon() * T::lit(m.max(1) as f64);
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let mut alpha = T::zero();
                    let mut beta = T::zero();
                    let mut gamma = T::zero();
                    for (x, y) in cp.iter().zip(cq) {
                        alpha += *x * *x;
                        beta += *y * *y;
                        gamma += *x * *y;
                    }
                    (alpha, beta, gamma)
                };
                if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (xv, yv) = (*x, *y);
                    *x = c * xv - s * yv;
                    *y = s * xv + c * yv;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = cols.iter().map(|c| norm2(c)).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    sv
}

/// `σ_max / σ_min`; infinite when the matrix is rank deficient.
pub fn condition_number<T: Real>(a: &RMatrix<T>) -> T {
    let sv = singular_values(a);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > T::zero() => hi / lo,
        _ => T::infinity(),
    }
}

/// Result of [`solve_linear`].
#[derive(Clone, Debug)]
pub struct LinearSolution<T> {
    pub x: Vec<T>,
    /// `‖a·x − y‖₂`.
    pub residual: T,
    /// `σ_max / σ_min` of `a`.
    pub condition: T,
}

/// Condition numbers above this are treated as singular.
pub fn singular_threshold<T: Real>() -> T {
    T::lit(1e-4) / T::epsilon()
}

/// Solves the square system `a·x = y` by LU with partial pivoting.
///
/// Matrices whose condition number exceeds [`singular_threshold`] are rejected
/// with [`QlaError::Singular`] instead of being regularized.
pub fn solve_linear<T: Real>(a: &RMatrix<T>, y: &[T]) -> Result<LinearSolution<T>, QlaError> {
    if a.rows != a.cols {
        return Err(QlaError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if y.len() != a.rows {
        return Err(QlaError::Shape {
            expected: a.rows,
            got: y.len(),
        });
    }
    let condition = condition_number(a);
    if !(condition <= singular_threshold::<T>()) {
        return Err(QlaError::Singular {
            condition: condition.to_f64_lossy(),
        });
    }
    let x = lu_solve(a, y).ok_or(QlaError::Singular {
        condition: condition.to_f64_lossy(),
    })?;
    let ax = a.mul_vec(&x);
    let residual = norm2(&ax.iter().zip(y).map(|(p, q)| *p - *q).collect::<Vec<_>>());
    Ok(LinearSolution {
        x,
        residual,
        condition,
    })
}

fn lu_solve<T: Real>(a: &RMatrix<T>, y: &[T]) -> Option<Vec<T>> {
    let n = a.rows;
    let mut lu = a.data.clone();
    let mut b = y.to_vec();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| {
                lu[i * n + k]
                    .abs()
                    .partial_cmp(&lu[j * n + k].abs())
                    .expect("finite entries")
            })
            .expect("non-empty range");
        if lu[pivot * n + k] == T::zero() {
            return None;
        }
        if pivot != k {
            for c in 0..n {
                lu.swap(k * n + c, pivot * n + c);
            }
            b.swap(k, pivot);
        }
        let d = lu[k * n + k];
        for r in (k + 1)..n {
            let f = lu[r * n + k] / d;
            if f == T::zero() {
                continue;
            }
            for c in (k + 1)..n {
                let v = lu[k * n + c];
                lu[r * n + c] -= f * v;
            }
            let bk = b[k];
            b[r] -= f * bk;
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in (r + 1)..n {
            acc -= lu[r * n + c] * x[c];
        }
        x[r] = acc / lu[r * n + r];
    }
    Some(x)
}
