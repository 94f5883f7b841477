// Lebesgue integrability of fast-decaying profiles: finite norms strictly
// inside the predicted interval, infinite at its endpoint.
//
// Run with `cargo run --example integrability`.

use wolffkit::{integrability_interval, lp_norm, make_ansatz, AnsatzKind, Parameters, RadialGrid, Result};

pub fn run_example() -> Result<()> {
    let params = Parameters::new(5, 1.0, 2.0, 1.5, 4.0, 0.0, 0.0)?;
    let interval = integrability_interval(&params)?;
    let grid = RadialGrid::with_density(1e-2, 1e4, 8)?;
    let (u, v) = make_ansatz(AnsatzKind::Fast, &params, &grid)?;
    for (name, f, low) in [("u", &u, interval.u_low), ("v", &v, interval.v_low)] {
        println!("{name}: open endpoint {low:.4}");
        for r in [low, low * 1.01, 2.0 * low, f64::INFINITY] {
            println!("  |{name}|_{r:.4} = {:?}", lp_norm(f, params.n, r, 0.0)?);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
