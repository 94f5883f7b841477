// Wolff and Riesz potentials of radial sources, the γ = 2 identity between
// them, and a check against direct convolution.
//
// Run with `cargo run --example potentials`.

use wolffkit::{
    riesz_convolution_at, riesz_eval, wolff_eval, PotentialConfig, RadialFunction, RadialGrid, Result, WolffOrder,
};

pub fn run_example() -> Result<()> {
    let grid = RadialGrid::with_density(1e-2, 1e3, 8)?;
    let cfg = PotentialConfig::default();
    let source = RadialFunction::from_fn(grid.clone(), |r| (1.0 + r * r).powf(-3.0), 0.0, 6.0, 0.0)?;

    let order = WolffOrder::new(5, 1.0, 2.0)?;
    let wolff = wolff_eval(order, &source, &cfg, &grid)?;
    let riesz = riesz_eval(5, 2.0, &source, &cfg, &grid)?;
    println!("{:>10} {:>14} {:>14} {:>14}", "r", "W_{1,2} f", "I_2 f / 3", "direct / 3");
    for &r in grid.points().iter().step_by(8) {
        let direct = riesz_convolution_at(5, 2.0, &source, r)?;
        println!("{r:>10.3e} {:>14.8e} {:>14.8e} {:>14.8e}", wolff.eval(r), riesz.eval(r) / 3.0, direct / 3.0);
    }
    let (_, tail, log) = (wolff.head_exponent(), wolff.tail_exponent(), wolff.tail_log_power());
    println!("far field: W f ~ r^-{tail} (ln r)^{log}");

    // a nonlinear order: W_{1,3/2} decays like r^{-(n-βγ)/(γ-1)} = r^-7
    let sublinear = wolff_eval(WolffOrder::new(5, 1.0, 1.5)?, &source, &cfg, &grid)?;
    println!("W_(1,3/2) f at r = 1: {:.6e}, tail exponent {}", sublinear.eval(1.0), sublinear.tail_exponent());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
