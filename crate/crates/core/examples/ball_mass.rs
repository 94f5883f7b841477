// Source mass of off-centre balls: the exact spherical-cap geometry behind
// every potential evaluation.
//
// Run with `cargo run --example ball_mass`.

use std::f64::consts::PI;

use wolffkit::geometry::ball_volume;
use wolffkit::{ball_mass, cap_fraction, CapKernel, RadialFunction, RadialGrid, Result};

pub fn run_example() -> Result<()> {
    let kernel = CapKernel::new(3)?;

    // fraction of the sphere |y| = r inside the ball B_t(x), |x| = ρ
    for r in [0.25, 0.5, 1.0, 1.5, 2.0] {
        println!("cap fraction at r = {r}: {:.6}", cap_fraction(&kernel, 1.0, 1.0, r)?);
    }

    // the lens between two unit balls at distance 1 has volume 5π/12
    let unit = RadialFunction::indicator(1.0, 1e-3, 64)?;
    let lens = ball_mass(&kernel, &unit, 1.0, 1.0)?;
    println!("lens volume {lens:.12} (exact {:.12})", 5.0 * PI / 12.0);

    // a constant source gives back the ball volume wherever the ball sits
    let ones = RadialFunction::from_fn(RadialGrid::with_density(1e-3, 1e3, 16)?, |_| 1.0, 0.0, 0.0, 0.0)?;
    for (rho, t) in [(0.0, 2.0), (3.0, 0.5), (10.0, 20.0)] {
        let m = ball_mass(&kernel, &ones, rho, t)?;
        println!("|B_{t}({rho})| = {m:.10} (exact {:.10})", ball_volume(3) * t.powi(3));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
