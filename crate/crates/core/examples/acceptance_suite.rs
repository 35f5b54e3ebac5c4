//! Runs the full acceptance battery and prints one line per criterion.

use xpchaos::harness::run_suite;

fn main() {
    let report = run_suite(|o| println!("{}", o.line()));
    println!("overall: {}", if report.pass { "PASS" } else { "FAIL" });
}
