//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

use tau_loop::selftest::{criterion_count, run_all};

fn main() -> ExitCode {
    let results = run_all();
    assert_eq!(results.len(), criterion_count());
    let mut failed = Vec::new();
    println!("acceptance: {} criteria", results.len());
    for r in &results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        println!("[{mark}] criterion {:>2}: {} ({} checks, {} ms)", r.id, r.name, r.checked, r.millis);
        for d in &r.details {
            println!("        {d}");
        }
        if !r.passed {
            failed.push(r.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
