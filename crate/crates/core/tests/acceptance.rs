//! One line per acceptance criterion; the target fails if any criterion fails.

use hss_core::selftest::{run_criterion, SelftestOptions};

#[test]
fn acceptance_criteria() {
    let opts = SelftestOptions::default();
    let mut failed = Vec::new();
    for id in 1..=9 {
        let c = run_criterion(id, &opts).expect("known criterion");
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("criterion {id}: {status} {} [{} ms] {}", c.name, c.elapsed_ms, c.detail);
        if !c.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
