// Saving and loading radial profiles: a CSV of samples plus a JSON sidecar
// with the head and tail models.
//
// Run with `cargo run --example profile_io`.

use wolffkit::{RadialFunction, RadialGrid, Result};

pub fn run_example() -> Result<()> {
    let grid = RadialGrid::with_density(1e-2, 1e2, 4)?;
    let f = RadialFunction::from_fn(grid, |r| (1.0 + r * r).powf(-1.5), 0.0, 3.0, 0.0)?;
    let dir = std::env::temp_dir().join(format!("wolffkit-profile-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|source| wolffkit::Error::Io { path: dir.clone(), source })?;
    let path = dir.join("f.csv");
    f.save(&path)?;
    let back = RadialFunction::load(&path)?;
    println!("{}", f.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("sidecar: {}", serde_json::to_string(&f.sidecar())?);
    println!("round trip exact: {}", back == f);
    println!("tail model beyond the grid: f(1e4) = {:.6e}", back.eval(1e4));
    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
