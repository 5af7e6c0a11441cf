//! Acceptance criteria: one PASS/FAIL line per criterion. Every comparison
//! is exact (tolerance zero). Runs without the libtest harness so the
//! verdict lines are always printed; exits nonzero if any criterion fails.

use std::process::ExitCode;

use defcohom_cli::reproduce;

/// Pinned seed for the randomized criteria.
const SEED: u64 = 0;

fn main() -> ExitCode {
    let criteria = reproduce::run_all(SEED);
    let mut failed = Vec::new();
    for c in &criteria {
        println!("{} [{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.title, c.detail);
        if !c.pass {
            failed.push(c.id);
        }
    }
    println!("acceptance: {} of {} criteria pass (tolerance: exact)", criteria.len() - failed.len(), criteria.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
