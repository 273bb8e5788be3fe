//! Acceptance criteria at their stated sizes and tolerances. Each test prints
//! one PASS/FAIL line, uncaptured, and fails when its criterion fails.

use std::io::Write;
use std::sync::OnceLock;

use regretlab::verify::{Suite, VerifyOptions};

fn suite() -> &'static Suite {
    static SUITE: OnceLock<Suite> = OnceLock::new();
    SUITE.get_or_init(|| Suite::new(VerifyOptions::default()))
}

fn criterion(id: u8) {
    let outcome = suite().run(id);
    // Written to the raw handle so the line shows even for passing tests.
    let _ = writeln!(std::io::stderr().lock(), "{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn criterion_1_minimax_values() {
    criterion(1);
}

#[test]
fn criterion_2_exp3_separation_slope() {
    criterion(2);
}

#[test]
fn criterion_3_accounts_against_threshold() {
    criterion(3);
}

#[test]
fn criterion_4_stochastic_instance_slope() {
    criterion(4);
}

#[test]
fn criterion_5_checked_soak() {
    criterion(5);
}

#[test]
fn criterion_6_unbiasedness() {
    criterion(6);
}

#[test]
fn criterion_7_threshold_drift() {
    criterion(7);
}

#[test]
fn criterion_8_determinism() {
    criterion(8);
}

#[test]
fn criterion_9_tail_bound() {
    criterion(9);
}
