// Runs the logarithmic-limit part of the verification suite and prints the
// report as JSON.
//
// Run with `cargo run --release --example verify_log_limit`.

use wolffkit::{run_suite, Parameters, Result, Status, Suite, VerifyConfig};

pub fn run_example() -> Result<()> {
    let params = Parameters::scalar(5, 1.0, 2.0, 7.0 / 3.0, 0.0)?;
    let report = run_suite(&params, Suite::Loglimit, 0, &VerifyConfig::default())?;
    for check in &report.checks {
        println!("{:?} {}: {:?} vs {:?}", check.status, check.name, check.measured, check.expected);
    }
    println!(
        "{} passed, {} failed",
        report.count(Status::Pass),
        report.count(Status::Fail)
    );
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
