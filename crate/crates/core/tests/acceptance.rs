//! Runs the ten verification criteria and prints one PASS/FAIL line each.
//! Built without the libtest harness so the lines always reach the console.

use std::process::ExitCode;

use landau_core::verify::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let report = run_criterion(id, false);
        println!("{}", report.summary());
        if let Some(e) = &report.error {
            println!("    error: {e}");
        }
        for c in report.checks.iter().filter(|c| !c.pass) {
            println!(
                "    {} target {:.6e} measured {:.6e} tolerance {:.1e}",
                c.check_id, c.target, c.measured, c.tolerance
            );
        }
        if !report.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
