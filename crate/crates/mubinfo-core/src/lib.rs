//! Invariant information measures over complete sets of mutually unbiased
//! bases.
//!
//! The crate simulates projective and POVM measurements on finite-dimensional
//! density matrices and compares two families of information measures on the
//! observed probabilities:
//!
//! - Shannon / von Neumann entropies, which quantify uncertainty but depend
//!   on the measurement basis chosen;
//! - the squared-deviation measure `I(p) = sum_i (p_i - 1/n)^2`, whose total
//!   over a complete set of d+1 mutually unbiased bases equals
//!   `purity - 1/d` and is therefore invariant under unitary changes of
//!   state or basis.
//!
//! Modules build on each other bottom-up: [`linalg`] (dense complex kernel),
//! [`state`] (density matrices), [`measurement`] (bases, MUB sets, POVMs),
//! [`infomeasure`] (the measures themselves) and [`experiments`] (seeded
//! pass/fail verification runs).

pub mod error;
pub mod experiments;
pub mod infomeasure;
pub mod linalg;
pub mod measurement;
pub mod state;

pub use error::{Error, Result};
pub use experiments::{ExperimentConfig, ExperimentResult, TrialRecord};
pub use infomeasure::{HaarAverage, InfoReport, ProbabilityDistribution};
pub use linalg::{ComplexMatrix, EigenDecomposition};
pub use measurement::{MubSet, Povm, ProjectiveMeasurement};
pub use state::{BlochVector, DensityMatrix};

/// Fixed CSV float format: 17 significant digits, `.` separator,
/// locale-independent.
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}
