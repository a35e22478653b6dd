use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::StateError;
use crate::qla::CMatrix;
use crate::scalar::Real;

/// Outcome of a two-qubit Bell measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellOutcome {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] =
        [Self::PsiMinus, Self::PsiPlus, Self::PhiMinus, Self::PhiPlus];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::PsiMinus => "PsiMinus",
            Self::PsiPlus => "PsiPlus",
            Self::PhiMinus => "PhiMinus",
            Self::PhiPlus => "PhiPlus",
        }
    }

    /// Bell state amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn state<T: Real>(self) -> [Complex<T>; 4] {
        let z = Complex::new(T::zero(), T::zero());
        let p = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        match self {
            Self::PsiMinus => [z, p, -p, z],
            Self::PsiPlus => [z, p, p, z],
            Self::PhiMinus => [p, z, z, -p],
            Self::PhiPlus => [p, z, z, p],
        }
    }

    /// Rank-1 projector onto the Bell state.
    pub fn projector<T: Real>(self) -> CMatrix<T> {
        let v = self.state::<T>();
        CMatrix::outer(&v, &v)
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BellOutcome {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self, StateError> {
        Self::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| StateError::UnknownLabel(s.to_owned()))
    }
}

/// Projector for a single Bell outcome (4×4).
pub fn bell_projector<T: Real>(outcome: BellOutcome) -> CMatrix<T> {
    outcome.projector()
}
