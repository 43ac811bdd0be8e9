//! Projective measurements, mutually unbiased basis sets for prime
//! dimensions, POVMs, and two-step sequential (collapse-then-measure)
//! statistics.
//!
//! The canonical MUB sets: for d = 2 the eigenbases of sigma_z, sigma_x,
//! sigma_y; for odd prime d the computational basis plus the d quadratic
//! phase bases with components `omega^(m k^2 + j k) / sqrt(d)`,
//! `omega = exp(2 pi i / d)`. Every pair of distinct bases then satisfies
//! `|<e_i|f_j>|^2 = 1/d`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infomeasure::ProbabilityDistribution;
use crate::linalg::{
    haar_unitary, hermitian_eig, inner_product, ComplexMatrix, EigenDecomposition,
};
use crate::state::{matrix_parts, DensityMatrix};

/// Orthonormality / completeness / unbiasedness tolerance.
pub const MEASUREMENT_TOL: f64 = 1e-10;

/// Born-rule sums for projective measurements must land this close to 1.
const PROJECTIVE_SUM_TOL: f64 = 1e-8;

/// POVM probability sums must land this close to 1.
const POVM_SUM_TOL: f64 = 1e-10;

/// Dimensions with a provided complete MUB set (primes up to 13).
pub const SUPPORTED_MUB_DIMS: [usize; 6] = [2, 3, 5, 7, 11, 13];

/// An orthonormal basis of `dim` vectors: one observable's eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    dim: usize,
    basis: Vec<Vec<Complex64>>,
    label: String,
}

impl ProjectiveMeasurement {
    /// Validates pairwise orthonormality and completeness of the rank-1
    /// projectors before accepting the basis.
    pub fn new(basis: Vec<Vec<Complex64>>, label: impl Into<String>) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 || dim > crate::linalg::MAX_DIM {
            return Err(Error::DimOutOfRange {
                dim,
                min: 1,
                max: crate::linalg::MAX_DIM,
            });
        }
        for v in &basis {
            if v.len() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: v.len(),
                });
            }
            for (k, z) in v.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry { row: k, col: 0 });
                }
            }
        }

        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let overlap = inner_product(&basis[i], &basis[j]);
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((overlap - expected).norm());
            }
        }
        if worst > MEASUREMENT_TOL {
            return Err(Error::NotOrthonormal {
                residual: worst,
                tolerance: MEASUREMENT_TOL,
            });
        }

        let mut sum = ComplexMatrix::zeros(dim)?;
        for v in &basis {
            sum = sum.add(&ComplexMatrix::outer_product(v)?)?;
        }
        let completeness = sum.max_abs_diff(&ComplexMatrix::identity(dim)?)?;
        if completeness > MEASUREMENT_TOL {
            return Err(Error::IncompleteBasis {
                residual: completeness,
                tolerance: MEASUREMENT_TOL,
            });
        }

        Ok(Self {
            dim,
            basis,
            label: label.into(),
        })
    }

    /// The standard (computational) basis.
    pub fn computational(dim: usize) -> Result<Self> {
        let basis = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|k| if k == i { Complex64::ONE } else { Complex64::ZERO })
                    .collect()
            })
            .collect();
        Self::new(basis, "computational")
    }

    /// Basis formed by the columns of a unitary matrix.
    pub fn from_unitary_columns(u: &ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let basis = (0..u.dim()).map(|j| u.column(j)).collect();
        Self::new(basis, label)
    }

    /// Eigenbasis of a decomposed Hermitian observable.
    pub fn from_eigenbasis(eig: &EigenDecomposition, label: impl Into<String>) -> Result<Self> {
        Self::from_unitary_columns(&eig.eigenvectors, label)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.basis
    }

    /// Rank-1 projector `|b_i><b_i|`.
    pub fn projector(&self, outcome: usize) -> ComplexMatrix {
        ComplexMatrix::outer_product(&self.basis[outcome]).expect("validated basis vector")
    }

    /// The same basis with every vector mapped through `u`.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim {
            return Err(Error::DimMismatch {
                left: u.dim(),
                right: self.dim,
            });
        }
        let basis = self
            .basis
            .iter()
            .map(|v| u.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(basis, self.label.clone())
    }

    /// Born probabilities `p_i = <b_i| rho |b_i>`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<ProbabilityDistribution> {
        if rho.dim() != self.dim {
            return Err(Error::DimMismatch {
                left: rho.dim(),
                right: self.dim,
            });
        }
        let raw = self
            .basis
            .iter()
            .map(|v| rho.matrix().expectation(v).map(|z| z.re))
            .collect::<Result<Vec<_>>>()?;
        ProbabilityDistribution::from_born(raw, PROJECTIVE_SUM_TOL)
    }
}

/// A complete set of `d + 1` pairwise mutually unbiased bases (prime `d`).
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    dim: usize,
    bases: Vec<ProjectiveMeasurement>,
}

impl MubSet {
    /// The canonical set for a supported prime dimension. Deterministic.
    pub fn canonical(dim: usize) -> Result<Self> {
        if !SUPPORTED_MUB_DIMS.contains(&dim) {
            return Err(Error::UnsupportedMubDim { dim });
        }
        let bases = if dim == 2 {
            qubit_pauli_bases()?
        } else {
            odd_prime_bases(dim)?
        };
        Self::from_bases(dim, bases)
    }

    /// Canonical set conjugated by a Haar-random unitary; still mutually
    /// unbiased, but no longer aligned with the computational basis.
    pub fn random_rotation(dim: usize, seed: u64) -> Result<Self> {
        let u = haar_unitary(dim, seed)?;
        Self::canonical(dim)?.rotated(&u)
    }

    /// Every basis vector mapped through `u`.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Self> {
        let bases = self
            .bases
            .iter()
            .map(|b| b.rotated(u))
            .collect::<Result<Vec<_>>>()?;
        Self::from_bases(self.dim, bases)
    }

    fn from_bases(dim: usize, bases: Vec<ProjectiveMeasurement>) -> Result<Self> {
        if bases.len() != dim + 1 {
            return Err(Error::DimMismatch {
                left: bases.len(),
                right: dim + 1,
            });
        }
        let set = Self { dim, bases };
        let residual = set.max_unbiasedness_residual();
        if residual > MEASUREMENT_TOL {
            return Err(Error::NotUnbiased {
                residual,
                tolerance: MEASUREMENT_TOL,
            });
        }
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[ProjectiveMeasurement] {
        &self.bases
    }

    /// Max deviation of `|<e_i|f_j>|^2` from `1/d` over all pairs of
    /// distinct bases.
    pub fn max_unbiasedness_residual(&self) -> f64 {
        let expected = 1.0 / self.dim as f64;
        let mut worst = 0.0f64;
        for a in 0..self.bases.len() {
            for b in (a + 1)..self.bases.len() {
                for e in self.bases[a].vectors() {
                    for f in self.bases[b].vectors() {
                        let overlap = inner_product(e, f).norm_sqr();
                        worst = worst.max((overlap - expected).abs());
                    }
                }
            }
        }
        worst
    }

    pub fn to_doc(&self) -> MubSetDoc {
        MubSetDoc {
            dim: self.dim,
            bases: self
                .bases
                .iter()
                .map(|b| BasisDoc {
                    label: b.label().to_string(),
                    vectors: b
                        .vectors()
                        .iter()
                        .map(|v| VectorDoc {
                            re: v.iter().map(|z| z.re).collect(),
                            im: v.iter().map(|z| z.im).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn qubit_pauli_bases() -> Result<Vec<ProjectiveMeasurement>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = Complex64::new;
    let z = ProjectiveMeasurement::new(
        vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
        "z",
    )?;
    let x = ProjectiveMeasurement::new(
        vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]],
        "x",
    )?;
    let y = ProjectiveMeasurement::new(
        vec![vec![c(s, 0.0), c(0.0, s)], vec![c(s, 0.0), c(0.0, -s)]],
        "y",
    )?;
    Ok(vec![z, x, y])
}

fn odd_prime_bases(dim: usize) -> Result<Vec<ProjectiveMeasurement>> {
    let mut bases = vec![ProjectiveMeasurement::computational(dim)?];
    let norm = 1.0 / (dim as f64).sqrt();
    for m in 0..dim {
        let mut vectors = Vec::with_capacity(dim);
        for j in 0..dim {
            let v = (0..dim)
                .map(|k| {
                    let exponent = (m * k * k + j * k) % dim;
                    let angle = 2.0 * std::f64::consts::PI * exponent as f64 / dim as f64;
                    Complex64::from_polar(norm, angle)
                })
                .collect();
            vectors.push(v);
        }
        bases.push(ProjectiveMeasurement::new(vectors, format!("quadratic-{m}"))?);
    }
    Ok(bases)
}

/// Positive operators summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    /// Validates Hermiticity and positivity of each element and
    /// completeness of the sum.
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = match elements.first() {
            Some(e) => e.dim(),
            None => {
                return Err(Error::DimOutOfRange {
                    dim: 0,
                    min: 1,
                    max: crate::linalg::MAX_DIM,
                })
            }
        };
        let mut sum = ComplexMatrix::zeros(dim)?;
        for e in &elements {
            let asym = e.hermitian_asymmetry();
            if asym > MEASUREMENT_TOL {
                return Err(Error::NotHermitian {
                    max_asymmetry: asym,
                    tolerance: MEASUREMENT_TOL,
                });
            }
            let min_eigenvalue = hermitian_eig(e)?.eigenvalues[0];
            if min_eigenvalue < -MEASUREMENT_TOL {
                return Err(Error::NotPositive {
                    min_eigenvalue,
                    tolerance: MEASUREMENT_TOL,
                });
            }
            sum = sum.add(e)?;
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim)?)?;
        if residual > MEASUREMENT_TOL {
            return Err(Error::IncompletePovm {
                residual,
                tolerance: MEASUREMENT_TOL,
            });
        }
        Ok(Self { dim, elements })
    }

    /// Pools all `d + 1` bases of a MUB set into one `(d+1) d`-outcome
    /// POVM with elements `|b_{j,i}><b_{j,i}| / (d + 1)`: the normalized
    /// sum of the bases' completeness relations. Outcomes are ordered
    /// bases-first (for d = 2: z+, z-, x+, x-, y+, y-).
    pub fn from_mub_set(mubs: &MubSet) -> Result<Self> {
        let weight = Complex64::new(1.0 / (mubs.dim() as f64 + 1.0), 0.0);
        let mut elements = Vec::with_capacity((mubs.dim() + 1) * mubs.dim());
        for basis in mubs.bases() {
            for outcome in 0..mubs.dim() {
                elements.push(basis.projector(outcome).scale(weight));
            }
        }
        Self::new(elements)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `||sum_k E_k - I||_max`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim).expect("valid dim");
        for e in &self.elements {
            sum = sum.add(e).expect("same dim");
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim).expect("valid dim"))
            .expect("same dim")
    }

    /// Outcome probabilities `q_k = tr(E_k rho)`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<ProbabilityDistribution> {
        if rho.dim() != self.dim {
            return Err(Error::DimMismatch {
                left: rho.dim(),
                right: self.dim,
            });
        }
        let raw = self
            .elements
            .iter()
            .map(|e| e.mul(rho.matrix()).map(|m| m.trace().re))
            .collect::<Result<Vec<_>>>()?;
        ProbabilityDistribution::from_born(raw, POVM_SUM_TOL)
    }

    pub fn to_doc(&self) -> PovmDoc {
        PovmDoc {
            dim: self.dim,
            elements: self
                .elements
                .iter()
                .map(|e| {
                    let (re, im) = matrix_parts(e);
                    MatrixDoc { re, im }
                })
                .collect(),
        }
    }
}

/// Joint statistics of measuring `first`, collapsing the state on the
/// observed outcome, then measuring `second`.
///
/// `p(a, b) = <b_b| P_a rho P_a |b_b>`; the joint distribution is indexed
/// `a * d + b`. Its marginal over `b` reproduces the `first`-measurement
/// distribution; the marginal over `a` generally does not reproduce a
/// direct `second` measurement, which is the disturbance the grouping
/// experiment exhibits.
pub fn sequential_measure(
    rho: &DensityMatrix,
    first: &ProjectiveMeasurement,
    second: &ProjectiveMeasurement,
) -> Result<ProbabilityDistribution> {
    let d = rho.dim();
    for m in [first, second] {
        if m.dim() != d {
            return Err(Error::DimMismatch {
                left: d,
                right: m.dim(),
            });
        }
    }
    let mut joint = Vec::with_capacity(d * d);
    for a in 0..d {
        let projector = first.projector(a);
        let collapsed = projector.mul(rho.matrix())?.mul(&projector)?;
        for b in 0..d {
            joint.push(collapsed.expectation(&second.vectors()[b])?.re);
        }
    }
    ProbabilityDistribution::from_born(joint, POVM_SUM_TOL)
}

/// Export form of a single basis vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorDoc {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Export form of one labeled basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisDoc {
    pub label: String,
    pub vectors: Vec<VectorDoc>,
}

/// Export form of a MUB set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MubSetDoc {
    pub dim: usize,
    pub bases: Vec<BasisDoc>,
}

/// Export form of one POVM element (same re/im layout as a state).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// Export form of a POVM.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovmDoc {
    pub dim: usize,
    pub elements: Vec<MatrixDoc>,
}
