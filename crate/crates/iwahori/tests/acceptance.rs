//! The acceptance gate: each numbered criterion runs exactly, within its
//! stated time budget, and prints one pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::time::{Duration, Instant};

use iwahori::selftest;

const SEED: u64 = 20260809;

fn run_criterion(
    label: &str,
    budget: Option<Duration>,
    f: fn(u64) -> Result<String, String>,
) {
    let start = Instant::now();
    let outcome = f(SEED);
    let elapsed = start.elapsed();
    match &outcome {
        Ok(detail) => println!("[PASS] {label}: {detail} ({} ms)", elapsed.as_millis()),
        Err(detail) => println!("[FAIL] {label}: {detail}"),
    }
    if let Err(detail) = outcome {
        panic!("{label}: {detail}");
    }
    if let Some(b) = budget {
        assert!(
            elapsed <= b,
            "{label} exceeded its {}s budget ({} ms)",
            b.as_secs(),
            elapsed.as_millis()
        );
    }
}

#[test]
fn criterion_01_length_formula_consistency() {
    run_criterion(
        "criterion 1 (length-formula consistency)",
        Some(Duration::from_secs(5)),
        selftest::criterion_length_formula,
    );
}

#[test]
fn criterion_02_bruhat_oracle_equivalence() {
    run_criterion(
        "criterion 2 (Bruhat oracle equivalence)",
        Some(Duration::from_secs(30)),
        selftest::criterion_bruhat_oracle,
    );
}

#[test]
fn criterion_03_admissible_set_counts() {
    run_criterion(
        "criterion 3 (admissible-set counts)",
        Some(Duration::from_secs(10)),
        selftest::criterion_admissible_counts,
    );
}

#[test]
fn criterion_04_sigma_straightness_equivalence() {
    run_criterion(
        "criterion 4 (σ-straightness equivalence)",
        Some(Duration::from_secs(60)),
        selftest::criterion_straightness_equivalence,
    );
}

#[test]
fn criterion_05_straight_translation_centrality() {
    run_criterion(
        "criterion 5 (straight-translation centrality)",
        None,
        selftest::criterion_straight_centrality,
    );
}

#[test]
fn criterion_06_b_g_mu_and_mu_ordinary() {
    run_criterion(
        "criterion 6 (B(G,{μ}) and μ-ordinary)",
        Some(Duration::from_secs(60)),
        selftest::criterion_b_g_mu,
    );
}

#[test]
fn criterion_07_very_special_order_isomorphism() {
    run_criterion(
        "criterion 7 (very-special order isomorphism)",
        Some(Duration::from_secs(120)),
        selftest::criterion_order_isomorphism,
    );
}

#[test]
fn criterion_08_straight_at_diamond_translations() {
    run_criterion(
        "criterion 8 (straight classes at μ◊ are translations)",
        None,
        selftest::criterion_straight_at_diamond,
    );
}

#[test]
fn criterion_09_loop_identities() {
    run_criterion(
        "criterion 9 (loop-group membership identities)",
        Some(Duration::from_secs(10)),
        selftest::criterion_loop_identities,
    );
}

#[test]
fn criterion_10_chain_termination() {
    run_criterion(
        "criterion 10 (curve-chain termination)",
        None,
        selftest::criterion_chain_termination,
    );
}

/// Criterion 11: the full selftest completes in under 5 minutes on one core,
/// and the GL₄ length-6 enumeration streams to completion (its working set is
/// a few thousand small elements, nowhere near the 2 GB bound).
#[test]
fn criterion_11_performance() {
    let start = Instant::now();
    let report = selftest::run(SEED, 1);
    let elapsed = start.elapsed();
    for c in &report.checks {
        assert!(c.ok, "selftest check {} failed: {}", c.name, c.detail);
    }
    println!(
        "[PASS] criterion 11 (performance): {} selftest checks in {} ms",
        report.checks.len(),
        elapsed.as_millis()
    );
    assert!(
        elapsed <= Duration::from_secs(300),
        "selftest exceeded 5 minutes: {} ms",
        elapsed.as_millis()
    );
    // Streaming enumeration: consume without retaining the elements.
    let d = iwahori::standard_datum("gl4").unwrap();
    let id = iwahori::ExtendedAffineElement::identity(d.clone());
    let mut count = 0usize;
    let mut max_len = 0i64;
    for w in iwahori::affine_weyl::enumerate_up_to_length(&d, 6, &[id]) {
        count += 1;
        max_len = max_len.max(w.length());
    }
    println!("[PASS] criterion 11 (streaming): {count} GL4 elements up to length {max_len}");
    assert!(count > 0 && max_len == 6);
}
