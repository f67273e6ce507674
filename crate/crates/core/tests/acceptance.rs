//! Acceptance gate: every criterion runs at its stated tolerance and prints
//! one pass/fail line (visible with `--nocapture`, or on failure).

use upb_core::acceptance::{self, CriterionReport};

fn assert_criterion(report: CriterionReport) {
    println!("{}", report.summary_line());
    for line in &report.details {
        println!("    {line}");
    }
    assert!(
        report.passed,
        "criterion {} failed:\n{}",
        report.id,
        report.details.join("\n")
    );
}

#[test]
fn c01_locus_table() {
    assert_criterion(acceptance::c1_locus_table());
}

#[test]
fn c02_phase_table_and_window() {
    assert_criterion(acceptance::c2_phase_table());
}

#[test]
fn c03_quadratic_identity() {
    assert_criterion(acceptance::c3_quadratic_identity());
}

#[test]
fn c04_analytic_numeric_agreement() {
    assert_criterion(acceptance::c4_analytic_numeric_agreement());
}

#[test]
fn c05_overshoot_table() {
    assert_criterion(acceptance::c5_overshoot_table());
}

#[test]
fn c06_nojump_breakdown_trend() {
    assert_criterion(acceptance::c6_nojump_breakdown());
}

#[test]
fn c07_cutoff_convergence() {
    assert_criterion(acceptance::c7_cutoff_convergence());
}

#[test]
fn c08_pulsed_run() {
    assert_criterion(acceptance::c8_pulsed_run());
}

#[test]
fn c09_disorder_tolerances() {
    assert_criterion(acceptance::c9_disorder_tolerances());
}

#[test]
fn c10_compensation() {
    assert_criterion(acceptance::c10_compensation());
}

#[test]
fn c11_single_site_crossover() {
    assert_criterion(acceptance::c11_single_site_crossover());
}

#[test]
fn c12_invariant_suite() {
    assert_criterion(acceptance::c12_invariants());
}
