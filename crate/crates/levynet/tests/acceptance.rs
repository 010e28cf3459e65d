//! End-to-end acceptance: every registered criterion runs at the pinned
//! configuration (root seed 42, registered sample sizes, tolerance scale 1)
//! and must pass. One test per criterion, so the harness prints one
//! pass/fail line each. Failures dump the per-sub-check margins.

use levynet::report::{run_criterion, suite_criteria, RunConfig, SUITES};

fn check(id: u8) {
    let cfg = RunConfig::default();
    let record = run_criterion(id, &cfg).expect("criterion must run to completion");
    println!(
        "{}: statistic {:.4} vs threshold {} ({} sub-checks, n = {}, {:.1} s)",
        record.id,
        record.statistic,
        record.threshold,
        record.checks.len(),
        record.n,
        record.runtime_ms as f64 / 1e3,
    );
    for line in &record.checks {
        println!("  - {line}");
    }
    assert!(
        record.passed,
        "{} failed with statistic {:.4}: {:#?}",
        record.id, record.statistic, record.checks
    );
}

#[test]
fn acceptance_01_jump_integral() {
    check(1);
}

#[test]
fn acceptance_02_fold_identity() {
    check(2);
}

#[test]
fn acceptance_03_csbp_laplace() {
    check(3);
}

#[test]
fn acceptance_04_extinction_law() {
    check(4);
}

#[test]
fn acceptance_05_subordinator_ratio() {
    check(5);
}

#[test]
fn acceptance_06_slice_depth() {
    check(6);
}

#[test]
fn acceptance_07_coalescence_counts() {
    check(7);
}

#[test]
fn acceptance_08_forest_bridge() {
    check(8);
}

#[test]
fn acceptance_09_snake_metric() {
    check(9);
}

#[test]
fn acceptance_10_excursion_tail() {
    check(10);
}

#[test]
fn acceptance_11_area_drift() {
    check(11);
}

#[test]
fn acceptance_12_reversal_law() {
    check(12);
}

#[test]
fn acceptance_suites_cover_every_criterion() {
    let mut ids: Vec<u8> = SUITES
        .iter()
        .filter(|&&s| s != "all")
        .flat_map(|s| suite_criteria(s).unwrap())
        .collect();
    ids.sort_unstable();
    assert_eq!(ids, (1..=12).collect::<Vec<u8>>());
}
