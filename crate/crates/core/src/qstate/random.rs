use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Density, StateError};
use crate::qla::CMatrix;
use crate::scalar::Real;

pub const MAX_RANDOM_QUBITS: usize = 5;

/// Ginibre-ensemble state `GG† / Tr(GG†)` with `G` a `2ⁿ × rank` matrix of
/// standard complex Gaussians drawn from a ChaCha8 stream seeded by `seed`.
pub fn random_density<T: Real>(
    qubits: usize,
    rank: usize,
    seed: u64,
) -> Result<Density<T>, StateError> {
    if !(1..=MAX_RANDOM_QUBITS).contains(&qubits) {
        return Err(StateError::InvalidQubits {
            qubits,
            max: MAX_RANDOM_QUBITS,
        });
    }
    let dim = 1usize << qubits;
    if rank == 0 || rank > dim {
        return Err(StateError::InvalidRank { rank, dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Vec::with_capacity(dim * rank);
    for _ in 0..dim * rank {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        g.push(Complex::new(T::lit(re), T::lit(im)));
    }
    let g = CMatrix::from_vec(dim, rank, g)?;
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    let rho = w.scale_real(T::one() / tr).hermitian_part();
    Density::new(rho)
}
