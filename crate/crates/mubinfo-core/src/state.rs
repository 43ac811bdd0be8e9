//! Density matrices: validated construction, purity, Bloch-vector
//! conversions for qubits, seeded random states, and the JSON document
//! format used by the CLI.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    complex_gaussian, hermitian_eig, stream_rng, vector_norm, ComplexMatrix, EigenDecomposition,
};

/// Validation tolerance for the density-matrix invariants (Hermiticity,
/// unit trace, positive semidefiniteness).
pub const DENSITY_TOL: f64 = 1e-10;

/// A quantum state: positive semidefinite Hermitian matrix with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates all three invariants and wraps the matrix. Each violation
    /// is reported with its measured residual.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let asym = matrix.hermitian_asymmetry();
        if asym > DENSITY_TOL {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
                tolerance: DENSITY_TOL,
            });
        }
        let trace = matrix.trace();
        let trace_residual = (trace - Complex64::ONE).norm();
        if trace_residual > DENSITY_TOL {
            return Err(Error::TraceNotOne {
                trace: trace.re,
                residual: trace_residual,
                tolerance: DENSITY_TOL,
            });
        }
        let eig = hermitian_eig(&matrix)?;
        let min_eigenvalue = eig.eigenvalues[0];
        if min_eigenvalue < -DENSITY_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue,
                tolerance: DENSITY_TOL,
            });
        }
        Ok(Self { matrix })
    }

    /// `I/d`, the state of complete ignorance.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let m = ComplexMatrix::identity(dim)?.scale(Complex64::new(1.0 / dim as f64, 0.0));
        Ok(Self { matrix: m })
    }

    /// Pure state `|v><v| / <v|v>` from an (unnormalized) amplitude vector.
    pub fn pure_from_vector(v: &[Complex64]) -> Result<Self> {
        let norm = vector_norm(v);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::SchemaViolation {
                field: "vector".into(),
                reason: format!("norm {norm} is not usable"),
            });
        }
        let unit: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
        Ok(Self {
            matrix: ComplexMatrix::outer_product(&unit)?,
        })
    }

    /// Random rank-`rank` state: Ginibre factor `G` of shape `dim x rank`,
    /// normalized as `G G^dagger / tr(G G^dagger)`. Deterministic in `seed`.
    pub fn random(dim: usize, rank: usize, seed: u64) -> Result<Self> {
        Self::random_from_rng(dim, rank, &mut stream_rng(seed, 0))
    }

    /// Same as [`DensityMatrix::random`] but drawing from a caller-owned
    /// generator (used by experiments for per-trial sub-seeding).
    pub fn random_from_rng(dim: usize, rank: usize, rng: &mut impl rand::Rng) -> Result<Self> {
        if rank == 0 || rank > dim {
            return Err(Error::RankOutOfRange { rank, dim });
        }
        let mut m = ComplexMatrix::zeros(dim)?;
        for _ in 0..rank {
            let col: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
            let outer = ComplexMatrix::outer_product(&col)?;
            m = m.add(&outer)?;
        }
        let trace = m.trace().re;
        let m = m.scale(Complex64::new(1.0 / trace, 0.0)).hermitian_part();
        Self::from_matrix(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `tr(rho^2)`; 1 for pure states, `1/d` for the maximally mixed state.
    pub fn purity(&self) -> f64 {
        self.matrix
            .mul(&self.matrix)
            .expect("square by construction")
            .trace()
            .re
    }

    /// Eigendecomposition of the state (ascending eigenvalues).
    pub fn eigen(&self) -> Result<EigenDecomposition> {
        hermitian_eig(&self.matrix)
    }

    /// Unitary rotation `U rho U^dagger`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::from_matrix(self.matrix.conjugate_by(u)?.hermitian_part())
    }
}

/// Qubit Bloch vector; `to_density` maps `r` to `(I + r . sigma)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Qubit density matrix for this Bloch vector.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let norm = self.norm();
        if norm > 1.0 + 1e-10 {
            return Err(Error::BlochNormTooLarge { norm });
        }
        let m = ComplexMatrix::from_entries(
            2,
            vec![
                Complex64::new(0.5 * (1.0 + self.z), 0.0),
                Complex64::new(0.5 * self.x, -0.5 * self.y),
                Complex64::new(0.5 * self.x, 0.5 * self.y),
                Complex64::new(0.5 * (1.0 - self.z), 0.0),
            ],
        )?;
        DensityMatrix::from_matrix(m)
    }

    /// Bloch vector of a qubit state: `r_k = tr(rho sigma_k)`.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::DimMismatch {
                left: rho.dim(),
                right: 2,
            });
        }
        let m = rho.matrix();
        Ok(Self {
            x: (m[(0, 1)] + m[(1, 0)]).re,
            y: (m[(1, 0)] - m[(0, 1)]).im,
            z: (m[(0, 0)] - m[(1, 1)]).re,
        })
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_entries(
        2,
        vec![
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
        ],
    )
    .expect("static entries")
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_entries(
        2,
        vec![
            Complex64::ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::ZERO,
        ],
    )
    .expect("static entries")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_entries(
        2,
        vec![
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(-1.0, 0.0),
        ],
    )
    .expect("static entries")
}

/// JSON document for a density matrix: `dim`, plus real and imaginary
/// parts as `dim x dim` row-major nested arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityMatrixDoc {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// Splits a matrix into nested `re`/`im` arrays (shared export format for
/// states, basis vectors and POVM elements).
pub fn matrix_parts(m: &ComplexMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let d = m.dim();
    let re = (0..d)
        .map(|i| (0..d).map(|j| m[(i, j)].re).collect())
        .collect();
    let im = (0..d)
        .map(|i| (0..d).map(|j| m[(i, j)].im).collect())
        .collect();
    (re, im)
}

fn parts_to_matrix(dim: usize, re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<ComplexMatrix> {
    for (name, part) in [("re", re), ("im", im)] {
        if part.len() != dim {
            return Err(Error::SchemaViolation {
                field: name.into(),
                reason: format!("expected {dim} rows, found {}", part.len()),
            });
        }
        for (i, row) in part.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::SchemaViolation {
                    field: format!("{name}[{i}]"),
                    reason: format!("expected {dim} columns, found {}", row.len()),
                });
            }
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| Complex64::new(re[i][j], im[i][j]))
}

impl DensityMatrixDoc {
    /// Shape- and finiteness-checked matrix, without the state invariants;
    /// lets callers measure how far an input is from being a valid state.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        parts_to_matrix(self.dim, &self.re, &self.im)
    }
}

impl DensityMatrix {
    pub fn to_doc(&self) -> DensityMatrixDoc {
        let (re, im) = matrix_parts(&self.matrix);
        DensityMatrixDoc {
            dim: self.dim(),
            re,
            im,
        }
    }

    /// Parses and fully validates a density-matrix document.
    pub fn from_doc(doc: &DensityMatrixDoc) -> Result<Self> {
        Self::from_matrix(doc.to_matrix()?)
    }
}
