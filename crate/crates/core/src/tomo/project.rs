use super::{TomoError, TILDE_HERMITIAN_TOL};
use crate::qla::{hermitian_eigen, CMatrix, QlaError};
use crate::qstate::Density;
use crate::scalar::Real;

/// Result of [`project_physical`].
#[derive(Clone, Debug)]
pub struct Projection<T> {
    pub state: Density<T>,
    /// `false` when the input already was a valid density matrix.
    pub projected: bool,
}

/// Nearest physical state by eigenvalue clipping.
///
/// The Hermitian part of `raw` is taken first. If it already passes the
/// density-matrix checks it is returned as is. Otherwise negative eigenvalues
/// are set to zero and the trace renormalized to 1.
pub fn project_physical<T: Real>(raw: &CMatrix<T>) -> Result<Projection<T>, TomoError> {
    if !raw.is_square() {
        return Err(QlaError::NotSquare {
            rows: raw.rows(),
            cols: raw.cols(),
        }
        .into());
    }
    let deviation = raw.hermitian_deviation().to_f64_lossy();
    if !(deviation <= TILDE_HERMITIAN_TOL) {
        return Err(TomoError::NotHermitian { deviation });
    }
    let h = raw.hermitian_part();
    if let Ok(state) = Density::new(h.clone()) {
        return Ok(Projection {
            state,
            projected: false,
        });
    }
    let eig = hermitian_eigen(&h)?;
    let total: T = eig.values.iter().map(|&l| l.max(T::zero())).sum();
    if !(total > T::zero()) {
        return Err(TomoError::Degenerate);
    }
    let clipped = eig
        .reassemble_with(|l| l.max(T::zero()) / total)
        .hermitian_part();
    Ok(Projection {
        state: Density::new(clipped)?,
        projected: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{random_density, trace_distance};
    use num_complex::Complex;

    #[test]
    fn valid_state_untouched() {
        let rho = random_density::<f64>(2, 3, 1).unwrap();
        let p = project_physical(rho.matrix()).unwrap();
        assert!(!p.projected);
        assert_eq!(p.state, rho);
    }

    #[test]
    fn clips_and_renormalizes() {
        let raw = CMatrix::<f64>::from_real_diagonal(&[1.1, -0.1]);
        let p = project_physical(&raw).unwrap();
        assert!(p.projected);
        assert!(
            p.state
                .matrix()
                .max_abs_diff(&CMatrix::from_real_diagonal(&[1.0, 0.0]))
                < 1e-15
        );
    }

    #[test]
    fn idempotent() {
        let raw = CMatrix::<f64>::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => Complex::new(0.7, 0.0),
            (1, 1) => Complex::new(0.3, 0.0),
            (0, 1) => Complex::new(0.5, 0.2),
            _ => Complex::new(0.5, -0.2),
        });
        let once = project_physical(&raw).unwrap();
        assert!(once.projected);
        let twice = project_physical(once.state.matrix()).unwrap();
        assert!(!twice.projected);
        assert_eq!(twice.state, once.state);
    }

    #[test]
    fn rejects_degenerate_and_non_hermitian() {
        let neg = CMatrix::<f64>::from_real_diagonal(&[-0.5, -0.5]);
        assert!(matches!(project_physical(&neg), Err(TomoError::Degenerate)));
        let mut skew = CMatrix::<f64>::identity(2);
        skew[(0, 1)] = Complex::new(0.1, 0.0);
        assert!(matches!(
            project_physical(&skew),
            Err(TomoError::NotHermitian { .. })
        ));
    }

    #[test]
    fn perturbation_stays_close() {
        for (seed, eps) in [(1u64, 1e-3), (2, 1e-2), (3, 1e-3), (4, 1e-2)] {
            let rho = random_density::<f64>(2, 2, seed).unwrap();
            let h = random_density::<f64>(2, 4, seed + 100).unwrap();
            let shift =
                &h.matrix().scale_real(eps) - &CMatrix::identity(4).scale_real(eps / 4.0 * 3.0);
            let p = project_physical(&(rho.matrix() + &shift)).unwrap();
            assert!(trace_distance(&p.state, &rho).unwrap() <= 10.0 * eps);
        }
    }
}
