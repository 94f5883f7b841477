// Fixed-point iteration for the integral system at the critical bubble tuple
// and the fitted decay rates of the result.
//
// Run with `cargo run --release --example solve_bubble`.

use wolffkit::solver::{iterate_system, GridSpec};
use wolffkit::{Parameters, Result, SolveConfig};

pub fn run_example() -> Result<()> {
    let params = Parameters::scalar(5, 1.0, 2.0, 7.0 / 3.0, 0.0)?;
    let cfg = SolveConfig {
        grid: GridSpec {
            r_max: 1e4,
            points_per_decade: 8,
            ..GridSpec::default()
        },
        rel_tol: 3e-3,
        ..SolveConfig::default()
    };
    let result = iterate_system(&params, &cfg)?;
    println!(
        "converged: {} after {} iterations, residuals {:.2e} / {:.2e}",
        result.converged, result.iterations, result.residual_u, result.residual_v
    );
    println!(
        "u ~ r^-{:.4}, v ~ r^-{:.4} on {:?} (predicted 3)",
        result.rate_u.exponent, result.rate_v.exponent, result.rate_u.window
    );
    for r in [0.1, 1.0, 10.0, 100.0] {
        println!("u({r}) = {:.6e}", result.u.eval(r));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
