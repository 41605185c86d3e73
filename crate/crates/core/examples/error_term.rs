//! Contour-integral error term ε(V) of the mean count for Q(ζ_16).

use ilz::cyclo_field::create_field;
use ilz::hecke::{error_term, mean_count_prediction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = create_field(16)?;
    for (sigma, t_max) in [(0.5, 60.0), (0.5, 120.0), (0.75, 60.0)] {
        let start = std::time::Instant::now();
        let r = error_term(&field, 16.0, sigma, t_max)?;
        println!(
            "sigma={sigma:<5} T={t_max:<6} eps={:+.10e} quad={:.2e} tail={:.2e} nodes={} ({:.1?})",
            r.epsilon,
            r.quad_error_est,
            r.tail_bound,
            r.n_nodes,
            start.elapsed()
        );
    }
    println!("E card = {:.8}", mean_count_prediction(&field, 16.0)?);
    Ok(())
}
