use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::StateError;
use crate::qla::CMatrix;
use crate::scalar::Real;

/// Names of the four standard probe states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InputLabel {
    Zero,
    One,
    Plus,
    RightCircular,
}

impl InputLabel {
    pub const ALL: [InputLabel; 4] = [Self::Zero, Self::One, Self::Plus, Self::RightCircular];

    /// Position in the standard order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Zero => "Zero",
            Self::One => "One",
            Self::Plus => "Plus",
            Self::RightCircular => "RightCircular",
        }
    }
}

impl fmt::Display for InputLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InputLabel {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self, StateError> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| StateError::UnknownLabel(s.to_owned()))
    }
}

/// Single-qubit pure state `α|0⟩ + β|1⟩` teleported by Alice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureQubit<T> {
    alpha: Complex<T>,
    beta: Complex<T>,
    label: Option<InputLabel>,
}

fn norm_tolerance<T: Real>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(8.0))
}

impl<T: Real> PureQubit<T> {
    pub fn new(alpha: Complex<T>, beta: Complex<T>) -> Result<Self, StateError> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !((norm - T::one()).abs() <= norm_tolerance::<T>()) {
            return Err(StateError::NotNormalized {
                norm: norm.to_f64_lossy(),
            });
        }
        Ok(Self {
            alpha,
            beta,
            label: None,
        })
    }

    /// The canonical state for `label`.
    pub fn standard(label: InputLabel) -> Self {
        let z = T::zero();
        let o = T::one();
        let s = T::FRAC_1_SQRT_2();
        let (alpha, beta) = match label {
            InputLabel::Zero => (Complex::new(o, z), Complex::new(z, z)),
            InputLabel::One => (Complex::new(z, z), Complex::new(o, z)),
            InputLabel::Plus => (Complex::new(s, z), Complex::new(s, z)),
            InputLabel::RightCircular => (Complex::new(s, z), Complex::new(z, s)),
        };
        Self {
            alpha,
            beta,
            label: Some(label),
        }
    }

    /// Builds the state without the normalization check; internal use for
    /// amplitude substitutions that preserve the norm exactly.
    pub(crate) fn from_parts(
        alpha: Complex<T>,
        beta: Complex<T>,
        label: Option<InputLabel>,
    ) -> Self {
        Self { alpha, beta, label }
    }

    pub fn with_label(mut self, label: Option<InputLabel>) -> Self {
        self.label = label;
        self
    }

    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    pub fn beta(&self) -> Complex<T> {
        self.beta
    }

    pub fn label(&self) -> Option<InputLabel> {
        self.label
    }

    pub fn amplitudes(&self) -> [Complex<T>; 2] {
        [self.alpha, self.beta]
    }

    /// `|ψ⟩⟨ψ| = [[|α|², αβ*], [α*β, |β|²]]`.
    pub fn projector(&self) -> CMatrix<T> {
        CMatrix::outer(&self.amplitudes(), &self.amplitudes())
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> T {
        (self.alpha.conj() * other.alpha + self.beta.conj() * other.beta).norm_sqr()
    }
}

/// `[|0⟩, |1⟩, (|0⟩+|1⟩)/√2, (|0⟩+i|1⟩)/√2]`, in this fixed order.
pub fn standard_inputs<T: Real>() -> [PureQubit<T>; 4] {
    InputLabel::ALL.map(PureQubit::standard)
}
