//! Seeded input builders shared by the benchmarks.

use mubinfo_core::linalg::{ginibre, stream_rng};
use mubinfo_core::{ComplexMatrix, DensityMatrix};

/// Random Hermitian matrix, deterministic in `(dim, seed)`.
pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = stream_rng(seed, 0);
    ginibre(dim, &mut rng).unwrap().hermitian_part()
}

/// Full-rank random state, deterministic in `(dim, seed)`.
pub fn random_state(dim: usize, seed: u64) -> DensityMatrix {
    DensityMatrix::random(dim, dim, seed).unwrap()
}
