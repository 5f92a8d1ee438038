//! Release acceptance suite: runs every validation criterion at its full
//! sample budget and stated tolerance, printing one pass/fail line per
//! criterion. Run with `--nocapture` to see the lines as they complete:
//!
//! ```text
//! cargo test -p risfbl-cli --test acceptance -- --nocapture
//! ```

use std::time::Duration;

use risfbl_cli::validate::{render_report, run_suite, suite_passed, ValidationBudget};
use risfbl_core::ScenarioConfig;

/// Wall-time targets for the criteria that carry one (single worker).
fn runtime_target(id: u32) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(60)),
        3 => Some(Duration::from_secs(10)),
        _ => None,
    }
}

#[test]
fn acceptance_criteria() {
    let scenario = ScenarioConfig::default();
    let budget = ValidationBudget::default();
    let results = run_suite(&scenario, &budget, 1, false);

    println!();
    let mut runtime_ok = true;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "acceptance {:>2} [{verdict}] {:<22} ({:>8.2?}) {}",
            r.id, r.name, r.elapsed, r.detail
        );
        if let Some(limit) = runtime_target(r.id) {
            if r.elapsed > limit {
                runtime_ok = false;
                println!(
                    "acceptance {:>2} [FAIL] runtime {:.2?} exceeds target {:.2?}",
                    r.id, r.elapsed, limit
                );
            }
        }
    }
    println!();

    let report = render_report(&results, &scenario, &budget, 1, false);
    assert!(
        suite_passed(&results),
        "acceptance criteria failed:\n{report}"
    );
    assert!(runtime_ok, "a runtime target was exceeded");
}

#[test]
fn negative_control_flags_ks_failure() {
    // Tampering the matched shape must flip the KS criterion to FAIL while
    // leaving the machinery running; this demonstrates the test has power.
    let scenario = ScenarioConfig::default();
    let budget = ValidationBudget::from_mc_samples(4000);
    let results = run_suite(&scenario, &budget, 1, true);
    let ks = results.iter().find(|r| r.name == "gamma-ks").unwrap();
    assert!(!ks.passed, "tampered shape must fail the KS criterion: {}", ks.detail);
    assert!(!suite_passed(&results));
}
