//! Mean number of lattice points in a ball against 1 + V + ε, and the
//! congruence of every count modulo the number of roots of unity.

use ilz::arakelov::{count_points_in_ball, radius_for_volume, ArakelovSampler, McEstimate};
use ilz::cyclo_field::create_field;
use ilz::hecke::{error_term, DEFAULT_SIGMA, DEFAULT_T};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = create_field(16)?;
    let sampler = ArakelovSampler::new(&k)?;
    for volume in [4.0, 8.0, 16.0] {
        let radius = radius_for_volume(k.degree(), volume);
        let counts = sampler.map(20_000, 5, |l| count_points_in_ball(l, radius));
        let congruent = counts.iter().all(|c| (c - 1) % k.torsion_order() == 0);
        let mc = McEstimate::from_values(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>());
        let et = error_term(&k, volume, DEFAULT_SIGMA, DEFAULT_T)?;
        println!(
            "V={volume:>4}: MC {:.4} ± {:.4}, 1+V+eps = {:.4} (eps {:.4}, tail bound {:.2e}), counts ≡ 1 mod {}: {congruent}",
            mc.mean,
            mc.stderr,
            1.0 + volume + et.epsilon,
            et.epsilon,
            et.tail_bound,
            k.torsion_order()
        );
    }
    Ok(())
}
