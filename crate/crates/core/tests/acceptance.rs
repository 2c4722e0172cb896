//! One test per acceptance criterion. Each prints its pass/fail line and
//! asserts the criterion as stated.

use symdiam::verify::{self, Criterion};

const SEED: u64 = 1;

fn check(c: Criterion) {
    println!("{}", c.line());
    assert!(c.passed, "{}\n{}", c.line(), serde_json::to_string_pretty(&c.detail).unwrap());
}

#[test]
fn criterion_01_polynomial_identity_f() {
    check(verify::criterion_1());
}

#[test]
fn criterion_02_polynomial_identities_h2_h3() {
    check(verify::criterion_2());
}

#[test]
fn criterion_03_threshold() {
    check(verify::criterion_3());
}

#[test]
fn criterion_04_contraction() {
    check(verify::criterion_4());
}

#[test]
fn criterion_05_anchor_seven_cycles() {
    check(verify::criterion_5());
}

#[test]
fn criterion_06_small_tree_catalogs() {
    check(verify::criterion_6());
}

#[test]
fn criterion_07_fixed_point_lower_bound() {
    check(verify::criterion_7());
}

#[test]
fn criterion_08_fixed_points_monte_carlo() {
    check(verify::criterion_8(SEED));
}

#[test]
fn criterion_09_exact_mixing() {
    check(verify::criterion_9());
}

#[test]
fn criterion_10_reduction_pipeline() {
    check(verify::criterion_10(SEED));
}

#[test]
fn criterion_11_word_search() {
    check(verify::criterion_11(SEED));
}

#[test]
fn criterion_12_determinism() {
    check(verify::criterion_12(SEED));
}
