//! Acceptance report: one PASS/FAIL line per criterion, printed whether or not
//! output capture is on. Exits non-zero if any criterion fails.
//!
//! `cargo test --test acceptance -- AC3 AC12` runs a subset; other arguments
//! that cargo forwards (flags such as `--nocapture`) are ignored.

use std::process::ExitCode;

use adsmagic::verify::{check_ids, run_check};

fn main() -> ExitCode {
    let wanted: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let ids: Vec<&str> =
        check_ids().into_iter().filter(|id| wanted.is_empty() || wanted.iter().any(|w| w == id)).collect();
    let mut failed = 0;
    for id in &ids {
        let outcome = run_check(id).expect("known criterion");
        println!("{outcome}");
        failed += usize::from(!outcome.passed);
    }
    println!("acceptance: {} passed, {failed} failed", ids.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
