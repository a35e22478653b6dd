use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use super::QlaError;
use crate::scalar::Real;

/// Largest row or column count any matrix may reach (2¹¹).
pub const MAX_DIM: usize = 1 << 11;

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self, QlaError> {
        if rows == 0 || cols == 0 {
            return Err(QlaError::Empty);
        }
        if data.len() != rows * cols {
            return Err(QlaError::Shape {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(QlaError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn column(&self, c: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermitian_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut dev = T::zero();
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()).scale(half)
        })
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul inner dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for (k, &a) in row.iter().enumerate() {
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                        acc + *a * *b
                    })
            })
            .collect()
    }

    /// `Tr(self · rhs)` without forming the product.
    pub fn trace_of_product(&self, rhs: &Self) -> Complex<T> {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.rows, rhs.cols);
        let mut acc = Complex::new(T::zero(), T::zero());
        for r in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(r, k)] * rhs[(k, r)];
            }
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

impl<T: Real> Neg for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn neg(self) -> CMatrix<T> {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| -*z).collect(),
        }
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

/// Kronecker product `a ⊗ b`; `a`'s indices are the most significant.
pub fn tensor<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>, QlaError> {
    let rows = a.rows.saturating_mul(b.rows);
    let cols = a.cols.saturating_mul(b.cols);
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(QlaError::DimensionOverflow {
            rows,
            cols,
            max: MAX_DIM,
        });
    }
    let mut out = CMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let s = a[(ar, ac)];
            if s.re == T::zero() && s.im == T::zero() {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = s * b[(br, bc)];
                }
            }
        }
    }
    Ok(out)
}

/// Tensor product of a non-empty sequence, left factor most significant.
pub fn tensor_all<'a, T: Real>(
    factors: impl IntoIterator<Item = &'a CMatrix<T>>,
) -> Result<CMatrix<T>, QlaError> {
    let mut it = factors.into_iter();
    let first = it.next().ok_or(QlaError::Empty)?.clone();
    it.try_fold(first, |acc, f| tensor(&acc, f))
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Flat offsets of every multi-index over the chosen subsystems, enumerated
/// with the first chosen subsystem most significant.
fn offsets(dims: &[usize], strides: &[usize], chosen: &[usize]) -> Vec<usize> {
    let mut offs = vec![0usize];
    for &k in chosen {
        let mut next = Vec::with_capacity(offs.len() * dims[k]);
        for &o in &offs {
            for d in 0..dims[k] {
                next.push(o + d * strides[k]);
            }
        }
        offs = next;
    }
    offs
}

fn check_dims<T: Real>(m: &CMatrix<T>, dims: &[usize]) -> Result<(), QlaError> {
    if !m.is_square() {
        return Err(QlaError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let product = dims.iter().try_fold(
        1usize,
        |acc, &d| {
            if d == 0 {
                None
            } else {
                acc.checked_mul(d)
            }
        },
    );
    if product != Some(m.rows) {
        return Err(QlaError::DimsMismatch {
            dims: dims.to_vec(),
            size: m.rows,
        });
    }
    Ok(())
}

/// Reduced matrix over the `keep` subsystems, which stay in their original
/// relative order.
pub fn partial_trace<T: Real>(
    m: &CMatrix<T>,
    dims: &[usize],
    keep: &[usize],
) -> Result<CMatrix<T>, QlaError> {
    check_dims(m, dims)?;
    if keep.is_empty() {
        return Err(QlaError::EmptyKeep);
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(QlaError::InvalidSubsystem {
            index: bad,
            count: dims.len(),
        });
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let st = strides(dims);
    let keep_off = offsets(dims, &st, &kept);
    let trace_off = offsets(dims, &st, &traced);
    let n = keep_off.len();
    let mut out = CMatrix::zeros(n, n);
    for (r, &ro) in keep_off.iter().enumerate() {
        for (c, &co) in keep_off.iter().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for &t in &trace_off {
                acc += m[(ro + t, co + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Reorders tensor factors: subsystem `j` of the result is subsystem
/// `order[j]` of the input.
pub fn permute_subsystems<T: Real>(
    m: &CMatrix<T>,
    dims: &[usize],
    order: &[usize],
) -> Result<CMatrix<T>, QlaError> {
    check_dims(m, dims)?;
    let mut seen = vec![false; dims.len()];
    if order.len() != dims.len() {
        return Err(QlaError::InvalidPermutation(order.to_vec()));
    }
    for &o in order {
        if o >= dims.len() || seen[o] {
            return Err(QlaError::InvalidPermutation(order.to_vec()));
        }
        seen[o] = true;
    }
    let st = strides(dims);
    // Enumerating old offsets in the new subsystem order yields, at position
    // `i`, the old flat index of new flat index `i`.
    let map = offsets(dims, &st, order);
    Ok(CMatrix::from_fn(m.rows, m.cols, |r, c| m[(map[r], map[c])]))
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn diag(v: &[f64]) -> CMatrix<f64> {
        CMatrix::from_real_diagonal(v)
    }

    fn seeded(rows: usize, cols: usize, seed: u64) -> CMatrix<f64> {
        // xorshift keeps these fixtures independent of the rand crate
        let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        CMatrix::from_fn(rows, cols, |_, _| c(next(), next()))
    }

    #[test]
    fn from_vec_rejects_non_finite_and_bad_length() {
        assert!(matches!(
            CMatrix::<f64>::from_vec(2, 2, vec![c(0.0, 0.0); 3]),
            Err(QlaError::Shape {
                expected: 4,
                got: 3
            })
        ));
        let mut v = vec![c(0.0, 0.0); 4];
        v[3] = c(f64::NAN, 0.0);
        assert!(matches!(
            CMatrix::from_vec(2, 2, v),
            Err(QlaError::NonFinite { row: 1, col: 1 })
        ));
    }

    #[test]
    fn tensor_identities() {
        let i2 = CMatrix::<f64>::identity(2);
        assert_eq!(tensor(&i2, &i2).unwrap(), CMatrix::identity(4));
        let t = tensor(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap();
        assert_eq!(t, diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn tensor_trace_factorizes() {
        let a = seeded(2, 2, 1);
        let b = seeded(2, 2, 2);
        let t = tensor(&a, &b).unwrap();
        // entrywise Kronecker oracle
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        assert_eq!(t[(2 * i + k, 2 * j + l)], a[(i, j)] * b[(k, l)]);
                    }
                }
            }
        }
        assert!((t.trace() - a.trace() * b.trace()).norm() < 1e-15);
    }

    #[test]
    fn tensor_is_associative() {
        let a = seeded(2, 2, 3);
        let b = seeded(2, 3, 4);
        let c3 = seeded(3, 2, 5);
        let left = tensor(&tensor(&a, &b).unwrap(), &c3).unwrap();
        let right = tensor(&a, &tensor(&b, &c3).unwrap()).unwrap();
        assert!(left.max_abs_diff(&right) < 1e-15);
    }

    #[test]
    fn tensor_overflow_is_reported() {
        let big = CMatrix::<f64>::identity(1 << 6);
        assert!(matches!(
            tensor(&big, &big),
            Err(QlaError::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let ra = diag(&[0.25, 0.75]);
        let mut rb = diag(&[0.6, 0.4]);
        rb[(0, 1)] = c(0.1, -0.2);
        rb[(1, 0)] = c(0.1, 0.2);
        let rho = tensor(&ra, &rb).unwrap();
        assert!(
            partial_trace(&rho, &[2, 2], &[1])
                .unwrap()
                .max_abs_diff(&rb)
                < 1e-15
        );
        assert!(
            partial_trace(&rho, &[2, 2], &[0])
                .unwrap()
                .max_abs_diff(&ra)
                < 1e-15
        );
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        let p = CMatrix::outer(&phi, &phi);
        let red = partial_trace(&p, &[2, 2], &[0]).unwrap();
        assert!(red.max_abs_diff(&diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_matches_explicit_loops() {
        let m = seeded(8, 8, 9);
        let red = partial_trace(&m, &[2, 2, 2], &[1]).unwrap();
        let mut oracle = CMatrix::<f64>::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        oracle[(i, j)] += m[(4 * a + 2 * i + b, 4 * a + 2 * j + b)];
                    }
                }
            }
        }
        assert!(red.max_abs_diff(&oracle) < 1e-15);
        assert!((red.trace() - m.trace()).norm() < 1e-14);
    }

    #[test]
    fn partial_trace_errors() {
        let m = CMatrix::<f64>::identity(4);
        assert!(matches!(
            partial_trace(&m, &[2, 3], &[0]),
            Err(QlaError::DimsMismatch { .. })
        ));
        assert!(matches!(
            partial_trace(&m, &[2, 2], &[]),
            Err(QlaError::EmptyKeep)
        ));
        assert!(matches!(
            partial_trace(&m, &[2, 2], &[2]),
            Err(QlaError::InvalidSubsystem { .. })
        ));
    }

    #[test]
    fn permutation_swaps_tensor_factors() {
        let a = seeded(2, 2, 11);
        let b = seeded(3, 3, 12);
        let ab = tensor(&a, &b).unwrap();
        let ba = tensor(&b, &a).unwrap();
        assert_eq!(permute_subsystems(&ab, &[2, 3], &[1, 0]).unwrap(), ba);
        assert!(permute_subsystems(&ab, &[2, 3], &[0, 0]).is_err());
    }
}
