use std::process::ExitCode;
use std::time::Instant;

use toroidal_core::verify::{run_suite, VerifyOptions, SUITES};

const SEED: u64 = 20240611;
const SHOWN_FAILURES: usize = 3;

fn main() -> ExitCode {
    let opts = VerifyOptions { seed: SEED, ..VerifyOptions::default() };
    let mut failed = 0;
    for suite in SUITES {
        let start = Instant::now();
        match run_suite(suite, &opts) {
            Ok(report) => {
                let verdict = if report.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{verdict} criterion {:>2} {:<22} {}/{} cases  {:.1}s",
                    suite.criterion,
                    suite.name,
                    report.summary.passed,
                    report.summary.total,
                    start.elapsed().as_secs_f64()
                );
                for case in report.cases.iter().filter(|c| !c.pass).take(SHOWN_FAILURES) {
                    println!("     {}: expected {} got {}", case.key, case.expected, case.got);
                }
                if !report.passed() {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("FAIL criterion {:>2} {:<22} setup error: {e}", suite.criterion, suite.name);
                failed += 1;
            }
        }
    }
    println!("{} of {} criteria passed", SUITES.len() - failed, SUITES.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
