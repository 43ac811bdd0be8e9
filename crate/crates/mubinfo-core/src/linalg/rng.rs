//! Seeded randomness: ChaCha12 streams, Ginibre matrices, Haar unitaries.
//!
//! All randomized code in the crate draws from [`stream_rng`]: ChaCha12
//! keyed by a 64-bit seed, with the ChaCha stream counter used as a
//! sub-seed. Trial `t` of an experiment uses stream `t`, so results do not
//! depend on execution order or thread scheduling.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use super::{inner_product, vector_norm, ComplexMatrix, MAX_DIM};
use crate::error::{Error, Result};

/// ChaCha12 generator for `(seed, stream)`. Streams are mutually
/// independent, which makes per-trial sub-seeding schedule-independent.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Square matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// One standard complex Gaussian sample (unit total variance).
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unitary, deterministic in `(dim, seed)`.
pub fn haar_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    haar_unitary_from_rng(dim, &mut stream_rng(seed, 0))
}

/// Haar-distributed unitary drawn from an existing generator.
///
/// Construction: complex Ginibre matrix followed by Gram-Schmidt
/// orthonormalization. Normalizing each column by its (real, positive)
/// length fixes the triangular factor's diagonal phases, which makes the
/// orthonormal factor exactly Haar-distributed.
pub fn haar_unitary_from_rng(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(Error::DimOutOfRange {
            dim,
            min: 2,
            max: MAX_DIM,
        });
    }
    // Redraw on near-singular input; measure zero, but keeps the
    // orthonormalization well-conditioned unconditionally.
    for _ in 0..8 {
        let g = ginibre(dim, rng)?;
        if let Some(q) = orthonormalize_columns(&g) {
            return Ok(q);
        }
    }
    unreachable!("repeated singular Ginibre draws")
}

/// Modified Gram-Schmidt with a second re-orthogonalization pass.
/// Returns `None` if a column collapses (numerically dependent columns).
fn orthonormalize_columns(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let d = g.dim();
    let mut cols: Vec<Vec<Complex64>> = (0..d).map(|j| g.column(j)).collect();
    for j in 0..d {
        let original_norm = vector_norm(&cols[j]);
        for _pass in 0..2 {
            for i in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let overlap = inner_product(&head[i], &tail[0]);
                for (v, q) in tail[0].iter_mut().zip(&head[i]) {
                    *v -= overlap * q;
                }
            }
        }
        let norm = vector_norm(&cols[j]);
        if norm <= 1e-8 * original_norm.max(1.0) {
            return None;
        }
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
    }
    Some(
        ComplexMatrix::from_fn(d, |i, j| cols[j][i])
            .expect("dimension already validated"),
    )
}
