//! |ζ_K(1/2 + it)| on the critical line against convexity-shaped curves.

use ilz::cyclo_field::create_field;
use ilz::zeta::subconvexity_profile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = create_field(16)?;
    let grid: Vec<f64> = (0..=20).map(|i| 5.0 * i as f64).collect();
    println!("{:>6} {:>14} {:>14} {:>14}", "t", "|zeta_K|", "convexity", "py");
    for row in subconvexity_profile(&k, &grid)? {
        println!("{:>6} {:>14.6} {:>14.6e} {:>14.6e}", row.t, row.zeta_abs, row.convexity_curve, row.py_curve);
    }
    Ok(())
}
