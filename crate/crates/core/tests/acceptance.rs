//! Acceptance gate: runs every criterion at its pinned tolerance and prints
//! one pass/fail line per criterion.

use carleman::accept::{format_table, run_acceptance};

#[test]
fn acceptance_suite() {
    let results = run_acceptance(false).expect("suite must run to completion");
    print!("{}", format_table(&results));
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
    for f in &failed {
        for d in &f.details {
            if d.starts_with("FAIL") {
                eprintln!("criterion {}: {}", f.id, d);
            }
        }
    }
    assert!(failed.is_empty(), "{} criteria failed", failed.len());
}
