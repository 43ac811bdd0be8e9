//! Information measures on outcome probabilities.
//!
//! Two families live here. Shannon entropy (with its grouping
//! decomposition) and von Neumann entropy quantify uncertainty; the
//! squared-deviation measure `I(p) = sum_i (p_i - 1/n)^2` quantifies the
//! knowledge gained in a single experiment. Summed over a complete set of
//! d+1 mutually unbiased bases the latter collapses to `purity - 1/d`,
//! independent of which complete set was chosen; the per-basis Shannon
//! entropies enjoy no such invariance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{haar_unitary_from_rng, stream_rng};
use crate::measurement::{MubSet, Povm, ProjectiveMeasurement};
use crate::state::DensityMatrix;

/// Strict sum tolerance for externally supplied distributions.
pub const DISTRIBUTION_SUM_TOL: f64 = 1e-9;

/// Born-rule values this far below zero are rounding, not invalid input.
pub const NEGATIVE_CLAMP_TOL: f64 = 1e-10;

/// Eigenvalues below this floor contribute nothing to entropies.
pub const ENTROPY_EIGENVALUE_FLOOR: f64 = 1e-12;

/// Minimum Monte Carlo sample size for the basis-averaged measure.
pub const HAAR_MIN_TRIALS: u64 = 100;

/// Nonnegative outcome probabilities summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityDistribution {
    p: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Accepts an explicit distribution: every entry in `[0, 1]`, sum
    /// within [`DISTRIBUTION_SUM_TOL`] of 1.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        for (index, &value) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(Error::ProbabilityOutOfRange { index, value });
            }
        }
        let sum: f64 = p.iter().sum();
        let residual = (sum - 1.0).abs();
        if residual > DISTRIBUTION_SUM_TOL {
            return Err(Error::ProbabilitySumNotOne {
                sum,
                residual,
                tolerance: DISTRIBUTION_SUM_TOL,
            });
        }
        Ok(Self { p })
    }

    /// Accepts raw Born-rule values: clamps rounding noise (entries in
    /// `[-1e-10, 0)` become 0, entries in `(1, 1+1e-10]` become 1),
    /// rejects anything further out, then renormalizes provided the sum
    /// is within `sum_tol` of 1.
    pub fn from_born(raw: Vec<f64>, sum_tol: f64) -> Result<Self> {
        let mut p = Vec::with_capacity(raw.len());
        for (index, &value) in raw.iter().enumerate() {
            let allowed = -NEGATIVE_CLAMP_TOL..=1.0 + NEGATIVE_CLAMP_TOL;
            if !value.is_finite() || !allowed.contains(&value) {
                return Err(Error::ProbabilityOutOfRange { index, value });
            }
            p.push(value.clamp(0.0, 1.0));
        }
        let sum: f64 = p.iter().sum();
        let residual = (sum - 1.0).abs();
        if residual > sum_tol {
            return Err(Error::ProbabilitySumNotOne {
                sum,
                residual,
                tolerance: sum_tol,
            });
        }
        for v in p.iter_mut() {
            *v /= sum;
        }
        Ok(Self { p })
    }

    /// The uniform distribution over `n` outcomes.
    pub fn uniform(n: usize) -> Self {
        Self {
            p: vec![1.0 / n as f64; n.max(1)],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

fn entropy_bits<'a>(probabilities: impl Iterator<Item = &'a f64>) -> f64 {
    let h: f64 = probabilities
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h + 0.0 // canonicalize -0.0 from p = 1 terms
}

/// Shannon entropy `H(p) = -sum p_i log2 p_i` in bits, with `0 log 0 = 0`.
pub fn shannon_entropy(p: &ProbabilityDistribution) -> f64 {
    entropy_bits(p.values().iter())
}

/// The two terms of the grouping (branching) decomposition of `H(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupingDecomposition {
    /// Entropy of the coarse-grained group weights.
    pub coarse_bits: f64,
    /// Weighted sum of within-group conditional entropies.
    pub conditional_bits: f64,
    /// `coarse_bits + conditional_bits`; equals `H(p)` for any partition.
    pub total_bits: f64,
}

/// Decomposes `H(p)` over a partition of the outcome indices:
/// `H(p) = H(w) + sum_g w_g H(p|g)` with `w_g` the group weights.
/// Groups of weight zero contribute zero conditional entropy.
pub fn grouping_decompose(
    p: &ProbabilityDistribution,
    partition: &[Vec<usize>],
) -> Result<GroupingDecomposition> {
    let n = p.len();
    let mut seen = vec![false; n];
    for group in partition {
        for &index in group {
            if index >= n {
                return Err(Error::MalformedPartition {
                    reason: format!("index {index} out of range for {n} outcomes"),
                });
            }
            if seen[index] {
                return Err(Error::MalformedPartition {
                    reason: format!("index {index} appears in more than one group"),
                });
            }
            seen[index] = true;
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::MalformedPartition {
            reason: format!("index {missing} not covered by any group"),
        });
    }

    let values = p.values();
    let weights: Vec<f64> = partition
        .iter()
        .map(|group| group.iter().map(|&i| values[i]).sum())
        .collect();
    let coarse_bits = entropy_bits(weights.iter());

    let mut conditional_bits = 0.0;
    for (group, &weight) in partition.iter().zip(&weights) {
        if weight <= 0.0 {
            continue;
        }
        let within: f64 = group
            .iter()
            .map(|&i| values[i] / weight)
            .filter(|&q| q > 0.0)
            .map(|q| -q * q.log2())
            .sum();
        conditional_bits += weight * within;
    }

    Ok(GroupingDecomposition {
        coarse_bits,
        conditional_bits,
        total_bits: coarse_bits + conditional_bits,
    })
}

/// Von Neumann entropy `S(rho) = -sum lambda_i log2 lambda_i` in bits.
/// Eigenvalues below [`ENTROPY_EIGENVALUE_FLOOR`] contribute zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = rho.eigen()?;
    let s: f64 = eig
        .eigenvalues
        .iter()
        .filter(|&&v| v >= ENTROPY_EIGENVALUE_FLOOR)
        .map(|&v| -v * v.log2())
        .sum();
    Ok(s + 0.0)
}

/// Squared deviation of the probabilities from uniform:
/// `I(p) = sum_i (p_i - 1/n)^2`. Zero exactly at total ignorance and
/// maximal, `(n-1)/n`, when one outcome is certain.
pub fn bz_measure(p: &ProbabilityDistribution) -> f64 {
    let n = p.len() as f64;
    let uniform = 1.0 / n;
    p.values().iter().map(|v| (v - uniform) * (v - uniform)).sum()
}

/// [`bz_measure`] rescaled by `n/(n-1)` so the maximum is exactly 1.
pub fn bz_measure_normalized(p: &ProbabilityDistribution) -> f64 {
    let n = p.len();
    if n <= 1 {
        return 0.0;
    }
    bz_measure(p) * n as f64 / (n as f64 - 1.0)
}

/// Raw second moment `sum_i p_i^2` of a distribution.
pub fn squared_probability_sum(p: &ProbabilityDistribution) -> f64 {
    p.values().iter().map(|v| v * v).sum()
}

/// Total information carried by a complete set of mutually unbiased
/// measurements: `sum_j I(p_j)`. Equal to `purity(rho) - 1/d` for every
/// valid MUB set, hence invariant under unitary rotations of the state or
/// of the set.
pub fn total_information(rho: &DensityMatrix, mubs: &MubSet) -> Result<f64> {
    if rho.dim() != mubs.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: mubs.dim(),
        });
    }
    let mut total = 0.0;
    for basis in mubs.bases() {
        total += bz_measure(&basis.probabilities(rho)?);
    }
    Ok(total)
}

/// The squared-deviation measure applied to a POVM's outcome
/// probabilities. For the pooled MUB POVM this equals
/// `(purity - 1/d) / (d+1)^2`: the total information is recovered from
/// one single measurement, up to the fixed pooling factor.
pub fn bz_from_povm(rho: &DensityMatrix, povm: &Povm) -> Result<f64> {
    Ok(bz_measure(&povm.probabilities(rho)?))
}

/// Monte Carlo estimate of an information measure averaged over
/// Haar-random measurement bases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HaarAverage {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
}

/// Averages `I(p)` over Haar-random orthonormal bases, as a
/// basis-independent generalization of the MUB sum. Deterministic in
/// `seed` (trial `t` draws from stream `t`); converges to
/// `(purity + 1)/(d + 1) - 1/d`.
pub fn haar_average_bz(rho: &DensityMatrix, trials: u64, seed: u64) -> Result<HaarAverage> {
    if trials < HAAR_MIN_TRIALS {
        return Err(Error::TooFewTrials {
            trials,
            min: HAAR_MIN_TRIALS,
        });
    }
    let dim = rho.dim();
    let mut samples = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = stream_rng(seed, trial);
        let u = haar_unitary_from_rng(dim, &mut rng)?;
        let basis = ProjectiveMeasurement::from_unitary_columns(&u, "haar")?;
        samples.push(bz_measure(&basis.probabilities(rho)?));
    }
    let n = trials as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let variance = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    Ok(HaarAverage {
        estimate: mean,
        std_error: (variance / n).sqrt(),
        trials,
    })
}

/// Per-basis entry of an [`InfoReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisInfo {
    pub label: String,
    pub shannon_bits: f64,
    pub bz_value: f64,
}

/// Report totals across the complete measurement set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoTotals {
    pub i_total: f64,
    pub shannon_sum: f64,
    pub von_neumann_bits: f64,
    pub purity: f64,
}

/// Side-by-side comparison of the measures for one state and one MUB set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoReport {
    pub per_basis: Vec<BasisInfo>,
    pub totals: InfoTotals,
}

impl InfoReport {
    /// CSV rendering. Columns:
    /// `kind,label,shannon_bits,bz_value,von_neumann_bits,purity`;
    /// one `basis` row per measurement, then one `totals` row carrying
    /// `shannon_sum` and `i_total` in the entropy/measure columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,label,shannon_bits,bz_value,von_neumann_bits,purity\n");
        for basis in &self.per_basis {
            out.push_str(&format!(
                "basis,{},{},{},,\n",
                basis.label,
                crate::csv_float(basis.shannon_bits),
                crate::csv_float(basis.bz_value),
            ));
        }
        out.push_str(&format!(
            "totals,,{},{},{},{}\n",
            crate::csv_float(self.totals.shannon_sum),
            crate::csv_float(self.totals.i_total),
            crate::csv_float(self.totals.von_neumann_bits),
            crate::csv_float(self.totals.purity),
        ));
        out
    }
}

/// Computes the full report: per-basis Shannon and squared-deviation
/// values plus their sums, von Neumann entropy and purity. When
/// `normalized` is set the squared-deviation values carry the `n/(n-1)`
/// rescaling (and `i_total` sums the rescaled values).
pub fn info_report(rho: &DensityMatrix, mubs: &MubSet, normalized: bool) -> Result<InfoReport> {
    if rho.dim() != mubs.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: mubs.dim(),
        });
    }
    let mut per_basis = Vec::with_capacity(mubs.bases().len());
    let mut i_total = 0.0;
    let mut shannon_sum = 0.0;
    for basis in mubs.bases() {
        let p = basis.probabilities(rho)?;
        let shannon_bits = shannon_entropy(&p);
        let bz_value = if normalized {
            bz_measure_normalized(&p)
        } else {
            bz_measure(&p)
        };
        i_total += bz_value;
        shannon_sum += shannon_bits;
        per_basis.push(BasisInfo {
            label: basis.label().to_string(),
            shannon_bits,
            bz_value,
        });
    }
    Ok(InfoReport {
        per_basis,
        totals: InfoTotals {
            i_total,
            shannon_sum,
            von_neumann_bits: von_neumann_entropy(rho)?,
            purity: rho.purity(),
        },
    })
}
