//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`) underlying all complex arithmetic.
///
/// The associated tolerances are the physicality thresholds used when validating
/// density matrices. The `f64` values are the contract values; `f32` gets looser
/// ones so the same code paths remain usable in single precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Max |m - m†| entry accepted as Hermitian.
    const HERMITIAN_TOL: f64;
    /// Max |Tr ρ - 1| accepted for a density matrix.
    const TRACE_TOL: f64;
    /// Most negative eigenvalue accepted as positive semidefinite.
    const PSD_TOL: f64;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal must be representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const HERMITIAN_TOL: f64 = 1e-9;
    const TRACE_TOL: f64 = 1e-9;
    const PSD_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const HERMITIAN_TOL: f64 = 1e-4;
    const TRACE_TOL: f64 = 1e-4;
    const PSD_TOL: f64 = 1e-4;
}
