//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned in code. Monte Carlo criteria use a
//! three-standard-error band plus a 1e-12 double-precision floor.

use std::process::Command;
use std::time::{Duration, Instant};

use mubinfo_core::experiments::{
    run_diagonal_equivalence, run_grouping_breakdown, run_haar_convergence, run_invariance_sweep,
    run_povm_invariant, ExperimentConfig,
};
use mubinfo_core::infomeasure::{
    shannon_entropy, squared_probability_sum, total_information, von_neumann_entropy,
};
use mubinfo_core::linalg::{haar_unitary, haar_unitary_from_rng, stream_rng, Complex64};
use mubinfo_core::measurement::{MubSet, Povm, ProjectiveMeasurement};
use mubinfo_core::state::{BlochVector, DensityMatrix};
use mubinfo_core::ComplexMatrix;

const RESIDUAL_TOL: f64 = 1e-10;
const STATISTICAL_FLOOR: f64 = 1e-12;

fn report(number: u8, name: &str, passed: bool, elapsed: Duration, budget: Duration) {
    let within_budget = elapsed <= budget;
    println!(
        "acceptance criterion {number} ({name}): {} in {:.2?} (budget {:?})",
        if passed && within_budget { "PASS" } else { "FAIL" },
        elapsed,
        budget,
    );
    assert!(passed, "criterion {number} ({name}) failed");
    assert!(
        within_budget,
        "criterion {number} ({name}) exceeded its runtime budget: {elapsed:.2?}"
    );
}

#[test]
fn criterion_1_pooled_povm_completeness() {
    let start = Instant::now();
    let mut passed = true;

    let qubit_povm = Povm::from_mub_set(&MubSet::canonical(2).unwrap()).unwrap();
    passed &= qubit_povm.len() == 6;
    passed &= qubit_povm.completeness_residual() <= RESIDUAL_TOL;

    for dim in [2usize, 3, 5, 7] {
        let povm = Povm::from_mub_set(&MubSet::canonical(dim).unwrap()).unwrap();
        passed &= povm.len() == (dim + 1) * dim;
        passed &= povm.completeness_residual() <= RESIDUAL_TOL;
    }

    report(
        1,
        "pooled POVM completeness",
        passed,
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_total_information_invariance() {
    let start = Instant::now();
    let mut passed = true;
    for dim in [2usize, 3, 5] {
        let cfg = ExperimentConfig::new(dim, 500, 20_260_810, RESIDUAL_TOL);
        let result = run_invariance_sweep(&cfg).unwrap();
        passed &= result.passed && result.summary.max_residual <= RESIDUAL_TOL;
    }
    report(
        2,
        "total information invariance",
        passed,
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_3_single_povm_invariant() {
    let start = Instant::now();
    let mut passed = true;
    for dim in [2usize, 3] {
        let cfg = ExperimentConfig::new(dim, 100, 31_337, RESIDUAL_TOL);
        let result = run_povm_invariant(&cfg).unwrap();
        passed &= result.passed && result.summary.max_residual <= RESIDUAL_TOL;
    }
    report(
        3,
        "single-POVM invariant",
        passed,
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_4_diagonal_basis_equivalence() {
    let start = Instant::now();
    let mut passed = true;

    for dim in [2usize, 3, 5] {
        let cfg = ExperimentConfig::new(dim, 500, 4_242, RESIDUAL_TOL);
        let result = run_diagonal_equivalence(&cfg).unwrap();
        passed &= result.passed && result.summary.max_residual <= RESIDUAL_TOL;
    }

    // 10^3 explicit random (state, basis) pairs: a measured Shannon
    // entropy never undercuts the von Neumann entropy.
    for trial in 0..1000u64 {
        let dim = [2usize, 3, 5][(trial % 3) as usize];
        let rank = (trial as usize % dim) + 1;
        let rho = DensityMatrix::random(dim, rank, trial).unwrap();
        let u = haar_unitary(dim, trial.wrapping_add(1_000_003)).unwrap();
        let basis = ProjectiveMeasurement::from_unitary_columns(&u, "haar").unwrap();
        let h = shannon_entropy(&basis.probabilities(&rho).unwrap());
        let s = von_neumann_entropy(&rho).unwrap();
        passed &= h >= s - RESIDUAL_TOL;
    }

    report(
        4,
        "diagonal-basis equivalence",
        passed,
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_5_grouping_axiom() {
    let start = Instant::now();
    let mut passed = true;

    // 10^3 random distributions/partitions (n <= 8) reconstruct exactly,
    // plus the fixed quantum contrast records.
    let cfg = ExperimentConfig::new(2, 1000, 55_555, RESIDUAL_TOL);
    let result = run_grouping_breakdown(&cfg).unwrap();
    passed &= result.passed;

    let gap_record = &result.records[result.records.len() - 2];
    passed &= (gap_record.values[0] - 1.0).abs() <= RESIDUAL_TOL;
    let commuting_record = &result.records[result.records.len() - 1];
    passed &= commuting_record.values[0].abs() <= RESIDUAL_TOL;

    report(
        5,
        "grouping axiom control and breakdown",
        passed,
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_6_haar_average() {
    let start = Instant::now();
    let mut passed = true;
    let trials = 100_000u64;

    // Independent Monte Carlo verification of the moment oracle
    // E[sum_i p_i^2] = (purity + 1)/(d + 1) before the closed form for
    // the averaged measure is trusted. This loop samples bases itself and
    // never calls the implementation under test.
    for dim in [2usize, 3] {
        let mut pure_vector = vec![Complex64::ZERO; dim];
        pure_vector[0] = Complex64::ONE;
        let states = [
            DensityMatrix::maximally_mixed(dim).unwrap(),
            DensityMatrix::pure_from_vector(&pure_vector).unwrap(),
        ];
        for (index, rho) in states.iter().enumerate() {
            let mut rng = stream_rng(777_000 + index as u64, 0);
            let mut samples = Vec::with_capacity(trials as usize);
            for _ in 0..trials {
                let u = haar_unitary_from_rng(dim, &mut rng).unwrap();
                let basis = ProjectiveMeasurement::from_unitary_columns(&u, "mc").unwrap();
                samples.push(squared_probability_sum(&basis.probabilities(rho).unwrap()));
            }
            let n = trials as f64;
            let mean = samples.iter().sum::<f64>() / n;
            let variance =
                samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            let se = (variance / n).sqrt();
            let moment = (rho.purity() + 1.0) / (dim as f64 + 1.0);
            let ok = (mean - moment).abs() <= 3.0 * se + STATISTICAL_FLOOR;
            passed &= ok;
            assert!(
                ok,
                "moment oracle failed at dim {dim}, state {index}: mean {mean} vs {moment} (se {se})"
            );
        }
    }

    // The averaged measure itself, against the closed form the moment
    // oracle just confirmed.
    for dim in [2usize, 3] {
        let cfg = ExperimentConfig::new(dim, trials, 906, RESIDUAL_TOL);
        let result = run_haar_convergence(&cfg).unwrap();
        passed &= result.passed;
    }

    report(
        6,
        "Haar basis average",
        passed,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_7_shannon_non_invariance_witness() {
    let start = Instant::now();

    // Documented witness: state |z+>, canonical Pauli MUBs vs the same
    // set rotated 45 degrees about y (exp(-i pi/8 sigma_y)).
    let rho = BlochVector::new(0.0, 0.0, 1.0).to_density().unwrap();
    let canonical = MubSet::canonical(2).unwrap();
    let angle = std::f64::consts::PI / 8.0;
    let rotation = ComplexMatrix::from_entries(
        2,
        vec![
            Complex64::new(angle.cos(), 0.0),
            Complex64::new(-angle.sin(), 0.0),
            Complex64::new(angle.sin(), 0.0),
            Complex64::new(angle.cos(), 0.0),
        ],
    )
    .unwrap();
    let rotated = canonical.rotated(&rotation).unwrap();

    let shannon_sum = |mubs: &MubSet| -> f64 {
        mubs.bases()
            .iter()
            .map(|b| shannon_entropy(&b.probabilities(&rho).unwrap()))
            .sum()
    };
    let shannon_gap = (shannon_sum(&canonical) - shannon_sum(&rotated)).abs();
    let bz_gap = (total_information(&rho, &canonical).unwrap()
        - total_information(&rho, &rotated).unwrap())
    .abs();

    let passed = shannon_gap > 1e-3 && bz_gap <= RESIDUAL_TOL;
    report(
        7,
        "Shannon non-invariance witness",
        passed,
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_8_cli_determinism() {
    let start = Instant::now();
    let mut passed = true;

    let replay = |args: &[&str]| -> (Vec<u8>, Vec<u8>) {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_mubinfo"))
                .args(args)
                .output()
                .expect("binary runs")
        };
        let (a, b) = (run(), run());
        assert!(
            a.status.code() == b.status.code(),
            "exit codes differ for {args:?}"
        );
        (a.stdout, b.stdout)
    };

    for args in [
        vec!["invariance", "--dim", "3", "--trials", "500", "--seed", "42"],
        vec![
            "grouping-demo",
            "--trials",
            "25",
            "--seed",
            "7",
            "--format",
            "csv",
        ],
        vec!["mubs", "--dim", "3", "--seed", "9"],
        vec![
            "povm-invariant",
            "--dim",
            "2",
            "--trials",
            "20",
            "--seed",
            "3",
            "--format",
            "csv",
        ],
        vec!["povm-eq1", "--dim", "2"],
    ] {
        let (first, second) = replay(&args);
        passed &= first == second;
        passed &= !first.is_empty();
    }

    report(
        8,
        "seeded CLI replay determinism",
        passed,
        start.elapsed(),
        Duration::from_secs(5),
    );
}
