use num_complex::Complex;

use super::StateError;
use crate::qla::{hermitian_eigen, partial_trace, CMatrix};
use crate::scalar::Real;

/// Validated n-qubit density matrix: Hermitian, unit trace, positive semidefinite.
///
/// Entry `(i, j)` (0-based) is the parameter `m_{i+1, j+1}`; the basis is the
/// computational one with qubit 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct Density<T> {
    qubits: usize,
    mat: CMatrix<T>,
}

impl<T: Real> Density<T> {
    /// Validates `mat` against every density-matrix invariant. Nothing is repaired.
    pub fn new(mat: CMatrix<T>) -> Result<Self, StateError> {
        let qubits = qubit_count(&mat)?;
        let dev = mat.hermitian_deviation();
        if !(dev <= T::lit(T::HERMITIAN_TOL)) {
            return Err(StateError::NotHermitian {
                deviation: dev.to_f64_lossy(),
            });
        }
        let tr = mat.trace();
        if !((tr.re - T::one()).abs() <= T::lit(T::TRACE_TOL)
            && tr.im.abs() <= T::lit(T::TRACE_TOL))
        {
            return Err(StateError::Trace {
                trace: tr.re.to_f64_lossy(),
            });
        }
        let eig = hermitian_eigen(&mat)?;
        let min = eig.values[0];
        if !(min >= -T::lit(T::PSD_TOL)) {
            return Err(StateError::NotPositive {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        Ok(Self { qubits, mat })
    }

    /// `I / 2ⁿ`.
    pub fn maximally_mixed(qubits: usize) -> Self {
        let d = 1usize << qubits;
        Self {
            qubits,
            mat: CMatrix::identity(d).scale_real(T::one() / T::lit(d as f64)),
        }
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector of length 2ⁿ.
    pub fn from_pure(amplitudes: &[Complex<T>]) -> Result<Self, StateError> {
        Self::new(CMatrix::outer(amplitudes, amplitudes))
    }

    /// Computational basis state `|index⟩⟨index|`.
    pub fn basis(qubits: usize, index: usize) -> Self {
        let d = 1usize << qubits;
        let mut mat = CMatrix::zeros(d, d);
        mat[(index, index)] = Complex::new(T::one(), T::zero());
        Self { qubits, mat }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.mat
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigen(&self.mat)
            .expect("validated density matrix is Hermitian")
            .values
    }

    /// Marginal on the kept qubits (in their original relative order).
    pub fn reduced(&self, keep: &[usize]) -> Result<Self, StateError> {
        let dims = vec![2; self.qubits];
        Self::new(partial_trace(&self.mat, &dims, keep)?)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        self.mat.trace_of_product(&self.mat).re
    }
}

fn qubit_count<T: Real>(mat: &CMatrix<T>) -> Result<usize, StateError> {
    if !mat.is_square() {
        return Err(StateError::Qla(crate::qla::QlaError::NotSquare {
            rows: mat.rows(),
            cols: mat.cols(),
        }));
    }
    let d = mat.rows();
    if d < 2 || !d.is_power_of_two() {
        return Err(StateError::NotQubitDimension(d));
    }
    Ok(d.trailing_zeros() as usize)
}

fn check_same_size<T: Real>(a: &Density<T>, b: &Density<T>) -> Result<(), StateError> {
    if a.qubits != b.qubits {
        return Err(StateError::DimensionMismatch {
            left: a.qubits,
            right: b.qubits,
        });
    }
    Ok(())
}

/// `½ Σ |λᵢ(a − b)|`.
pub fn trace_distance<T: Real>(a: &Density<T>, b: &Density<T>) -> Result<T, StateError> {
    check_same_size(a, b)?;
    let diff = &a.mat - &b.mat;
    let eig = hermitian_eigen(&diff)?;
    let half = T::lit(0.5);
    Ok((eig.values.iter().map(|l| l.abs()).sum::<T>() * half).min(T::one()))
}

/// `‖a − b‖_F`.
pub fn frobenius_distance<T: Real>(a: &Density<T>, b: &Density<T>) -> Result<T, StateError> {
    check_same_size(a, b)?;
    Ok((&a.mat - &b.mat).frobenius_norm())
}
