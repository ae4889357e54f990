//! Acceptance suite: one pass/fail line per criterion. The same checks
//! back the `csbubble verify` subcommand.

use csbubble::verify::run_all;

#[test]
fn acceptance_criteria() {
    let results = run_all();
    let mut failed = Vec::new();
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {} — {}", r.name, r.detail);
        if !r.passed {
            failed.push(r.name.clone());
        }
    }
    assert!(
        failed.is_empty(),
        "acceptance criteria failed: {}",
        failed.join(", ")
    );
}
