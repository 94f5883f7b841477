// Radial shooting for the Lane-Emden system: the separatrix between shots
// that cross zero and shots that decay slowly is the fast-decaying ground
// state.
//
// Run with `cargo run --release --example shoot`.

use wolffkit::quasilinear::{find_fast_ground_state, shoot, ShootConfig, StepConfig};
use wolffkit::{Parameters, Result};

pub fn run_example() -> Result<()> {
    // n = 3, p = 5: the threshold is the bubble (1 + r²/3)^{-1/2}
    let critical = Parameters::scalar(3, 1.0, 2.0, 5.0, 0.0)?;
    let ground = find_fast_ground_state(&critical, &ShootConfig::default())?;
    println!("threshold v(0) = {:.12} in {:?}", ground.b, ground.bracket);
    for r in [0.1f64, 1.0, 10.0, 100.0] {
        let exact = (1.0 + r * r / 3.0).powf(-0.5);
        println!("u({r}) = {:.10} (bubble {exact:.10})", ground.result.u.eval(r));
    }
    println!("fitted rate {:.5} (predicted 1)", ground.result.rate_u.exponent);

    // a critical pair with distinct exponents
    let pair = Parameters::new(5, 1.0, 2.0, 1.5, 4.0, 0.0, 0.0)?;
    let ground = find_fast_ground_state(&pair, &ShootConfig::default())?;
    println!(
        "pair (p, q) = (3/2, 4): u ~ r^-{:.4}, v ~ r^-{:.4} (predicted 3 and 2.5)",
        ground.result.rate_u.exponent, ground.result.rate_v.exponent
    );

    // individual shots on either side of the threshold
    for b in [0.9, 1.1] {
        let shot = shoot(&critical, 1.0, b, 1e3, &StepConfig::default())?;
        println!("v(0) = {b}: {:?}", shot.event);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
