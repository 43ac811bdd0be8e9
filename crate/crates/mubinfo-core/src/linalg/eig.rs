//! Hermitian eigendecomposition via cyclic Jacobi rotations.
//!
//! Complex Jacobi: every sweep visits each off-diagonal pair `(p, q)` and
//! applies the unitary plane rotation that zeroes `a_pq`. Plenty fast and
//! robust at `d <= 16`; no attempt at BLAS-level performance.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Elementwise Hermitian-symmetry tolerance required of inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius-norm threshold (relative to the matrix scale) at
/// which the sweep loop declares convergence.
const OFF_NORM_THRESHOLD: f64 = 1e-12;

/// Sweep cap; non-convergence by then is reported as a numeric error.
const MAX_SWEEPS: usize = 100;

/// Result of a Hermitian eigendecomposition.
///
/// Eigenvalues are real and sorted ascending; column `i` of `eigenvectors`
/// is a unit eigenvector for `eigenvalues[i]`. Within a degenerate cluster
/// the columns are an arbitrary orthonormal span.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.eigenvectors.dim();
        ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| {
                    self.eigenvectors[(i, k)]
                        * self.eigenvalues[k]
                        * self.eigenvectors[(j, k)].conj()
                })
                .sum()
        })
        .expect("dimension already validated")
    }

    /// `||A - V diag(lambda) V^dagger||_max` against the original matrix.
    pub fn reconstruction_residual(&self, a: &ComplexMatrix) -> Result<f64> {
        self.reconstruct().max_abs_diff(a)
    }

    /// Max deviation of `V^dagger V` from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let v = &self.eigenvectors;
        let gram = v.adjoint().mul(v).expect("square");
        let id = ComplexMatrix::identity(v.dim()).expect("dim validated");
        gram.max_abs_diff(&id).expect("same dimension")
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian within [`HERMITIAN_TOL`] elementwise; the
/// solver then works on the exactly-Hermitian part `(A + A^dagger)/2`.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let asym = a.hermitian_asymmetry();
    if asym > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
            tolerance: HERMITIAN_TOL,
        });
    }

    let d = a.dim();
    let mut work = a.hermitian_part();
    let mut vectors = ComplexMatrix::identity(d)?;
    let threshold = OFF_NORM_THRESHOLD * work.frobenius_norm().max(1.0);

    let mut converged = off_diagonal_norm(&work) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigNoConvergence {
                sweeps,
                off_norm: off_diagonal_norm(&work),
            });
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate_pair(&mut work, &mut vectors, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&work) <= threshold;
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        work[(i, i)]
            .re
            .partial_cmp(&work[(j, j)].re)
            .expect("eigenvalues are finite")
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&i| work[(i, i)].re).collect();
    let mut sorted = ComplexMatrix::zeros(d)?;
    for (new_col, &old_col) in order.iter().enumerate() {
        let col = vectors.column(old_col);
        let norm = super::vector_norm(&col);
        for row in 0..d {
            sorted[(row, new_col)] = col[row] / norm;
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: sorted,
    })
}

/// One Jacobi rotation zeroing `a_pq`.
///
/// For the 2x2 Hermitian block `[[alpha, beta], [conj(beta), gamma]]` with
/// `beta = |beta| e^{i phi}` the rotation is the phase-adjusted plane
/// rotation with tangent `t` solving `t^2 - 2 theta t - 1 = 0`,
/// `theta = (gamma - alpha) / (2 |beta|)`; the smaller root keeps the
/// rotation angle below pi/4 for stability.
fn rotate_pair(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = a[(p, q)];
    let beta_abs = beta.norm();
    if beta_abs == 0.0 {
        return;
    }
    let alpha = a[(p, p)].re;
    let gamma = a[(q, q)].re;
    let phase = beta / beta_abs;

    let theta = (gamma - alpha) / (2.0 * beta_abs);
    let t = if theta == 0.0 {
        1.0
    } else {
        -theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let d = a.dim();
    // Column update: M <- M J with J[p,p]=J[q,q]=c, J[q,p]=s e^{-i phi},
    // J[p,q]=-s e^{i phi}.
    let s_conj_phase = s * phase.conj();
    let s_phase = s * phase;
    for k in 0..d {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * s_conj_phase;
        a[(k, q)] = akq * c - akp * s_phase;
    }
    // Row update: M <- J^dagger M.
    for k in 0..d {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * s_phase;
        a[(q, k)] = aqk * c - apk * s_conj_phase;
    }
    // The rotated block is diagonal by construction; write it exactly.
    let two_sc_beta = 2.0 * s * c * beta_abs;
    a[(p, p)] = Complex64::new(alpha * c * c + gamma * s * s + two_sc_beta, 0.0);
    a[(q, q)] = Complex64::new(alpha * s * s + gamma * c * c - two_sc_beta, 0.0);
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;

    // Accumulate the eigenvector basis.
    for k in 0..d {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * s_conj_phase;
        v[(k, q)] = vkq * c - vkp * s_phase;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ginibre, stream_rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Closed-form 2x2 Hermitian eigenvalues from the characteristic
    /// polynomial; independent oracle for the iterative solver.
    fn eig2_oracle(a: &ComplexMatrix) -> (f64, f64) {
        let (p, q) = (a[(0, 0)].re, a[(1, 1)].re);
        let b = a[(0, 1)].norm_sqr();
        let mid = 0.5 * (p + q);
        let disc = (0.25 * (p - q) * (p - q) + b).sqrt();
        (mid - disc, mid + disc)
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let id = ComplexMatrix::identity(2).unwrap();
        let eig = hermitian_eig(&id).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() <= 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() <= 1e-14);
        assert!(eig.orthonormality_residual() <= 1e-10);
    }

    #[test]
    fn pauli_z_is_already_diagonal() {
        let sz = ComplexMatrix::from_entries(
            2,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        )
        .unwrap();
        let eig = hermitian_eig(&sz).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn pauli_x_matches_characteristic_polynomial() {
        let sx = ComplexMatrix::from_entries(
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let (lo, hi) = eig2_oracle(&sx);
        assert_eq!((lo, hi), (-1.0, 1.0));

        let eig = hermitian_eig(&sx).unwrap();
        assert!((eig.eigenvalues[0] - lo).abs() <= 1e-12);
        assert!((eig.eigenvalues[1] - hi).abs() <= 1e-12);
        // Eigenvectors are (1, -1)/sqrt(2) and (1, 1)/sqrt(2) up to phase:
        // check |<row0 component>| = |<row1 component>| = 1/sqrt(2).
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for col in 0..2 {
            for row in 0..2 {
                assert!((eig.eigenvectors[(row, col)].norm() - inv_sqrt2).abs() <= 1e-12);
            }
        }
        assert!(eig.reconstruction_residual(&sx).unwrap() <= 1e-10);
    }

    #[test]
    fn pauli_y_reconstructs() {
        let sy = ComplexMatrix::from_entries(
            2,
            vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        )
        .unwrap();
        let eig = hermitian_eig(&sy).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() <= 1e-12);
        assert!((eig.eigenvalues[1] - 1.0).abs() <= 1e-12);
        assert!(eig.reconstruction_residual(&sy).unwrap() <= 1e-10);
    }

    #[test]
    fn random_hermitian_reconstruction_across_dims() {
        for &dim in &[2usize, 3, 5, 8, 16] {
            for stream in 0..20u64 {
                let mut rng = stream_rng(99, stream);
                let g = ginibre(dim, &mut rng).unwrap();
                let h = g.hermitian_part();
                let eig = hermitian_eig(&h).unwrap();
                assert!(
                    eig.reconstruction_residual(&h).unwrap() <= 1e-10,
                    "reconstruction failed at dim {dim}, stream {stream}"
                );
                assert!(
                    eig.orthonormality_residual() <= 1e-10,
                    "orthonormality failed at dim {dim}, stream {stream}"
                );
                for w in eig.eigenvalues.windows(2) {
                    assert!(w[0] <= w[1], "eigenvalues not ascending");
                }
            }
        }
    }

    #[test]
    fn random_2x2_matches_characteristic_polynomial() {
        for stream in 0..50u64 {
            let mut rng = stream_rng(1234, stream);
            let h = ginibre(2, &mut rng).unwrap().hermitian_part();
            let (lo, hi) = eig2_oracle(&h);
            let eig = hermitian_eig(&h).unwrap();
            assert!((eig.eigenvalues[0] - lo).abs() <= 1e-12);
            assert!((eig.eigenvalues[1] - hi).abs() <= 1e-12);
        }
    }

    #[test]
    fn non_hermitian_input_names_the_asymmetry() {
        let m = ComplexMatrix::from_entries(
            2,
            vec![c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        match hermitian_eig(&m) {
            Err(Error::NotHermitian { max_asymmetry, .. }) => {
                assert!((max_asymmetry - 0.5).abs() <= 1e-15);
            }
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }
}
