// Classifies a few parameter tuples and prints their decay predictions.
//
// Run with `cargo run --example classify`.

use wolffkit::{classify_regime, exponents, integrability_interval, Parameters, Result};

pub fn run_example() -> Result<()> {
    let tuples = [
        ("bubble", Parameters::scalar(5, 1.0, 2.0, 7.0 / 3.0, 0.0)?),
        ("logarithmic", Parameters::new(5, 1.0, 2.0, 5.0 / 3.0, 31.0 / 9.0, 0.0, 0.0)?),
        ("intermediate", Parameters::new(5, 1.0, 2.0, 1.5, 4.0, 0.0, 0.0)?),
        ("weighted", Parameters::new(5, 1.0, 1.5, 2.0, 2.0, -0.5, -0.5)?),
    ];
    for (label, params) in tuples {
        let report = classify_regime(&params);
        let e = exponents(&params);
        println!(
            "{label:>12}: {:?} / {:?}, u ~ r^-{:.4}, v ~ r^-{:.4} (ln r)^{}, q0 = {:.4}, p0 = {:.4}",
            report.regime,
            report.subcriticality,
            report.predicted_u_exponent,
            report.predicted_v_exponent,
            report.v_log_power,
            e.q0,
            e.p0
        );
        if let Ok(interval) = integrability_interval(&params) {
            println!("{:>12}  u in L^r for r > {:.4}, v in L^s for s > {:.4}", "", interval.u_low, interval.v_low);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
