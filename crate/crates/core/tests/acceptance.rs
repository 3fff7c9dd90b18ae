//! Acceptance suite: every criterion at its stated tolerance.
//!
//! Prints each individual check, then one verdict line per criterion, and
//! exits non-zero when any criterion fails.

use std::process::ExitCode;

use giant_atoms::verify::run_suite;

const CRITERIA: std::ops::RangeInclusive<u32> = 1..=11;

fn main() -> ExitCode {
    let started = std::time::Instant::now();
    let report = run_suite();

    println!("checks:");
    for check in &report.checks {
        println!("  {check}");
    }
    for note in &report.notes {
        println!("note: {note}");
    }

    println!("\ncriteria:");
    let mut failed = Vec::new();
    for n in CRITERIA {
        let checks: Vec<_> = report.criterion(n).collect();
        let passed = checks.iter().filter(|c| c.pass).count();
        let ok = !checks.is_empty() && passed == checks.len();
        if !ok {
            failed.push(n);
        }
        println!(
            "  criterion {n:>2}: {} ({passed}/{} checks)",
            if ok { "PASS" } else { "FAIL" },
            checks.len()
        );
    }
    println!(
        "\n{} of {} criteria passed in {:.1?}",
        CRITERIA.count() - failed.len(),
        CRITERIA.count(),
        started.elapsed()
    );

    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
