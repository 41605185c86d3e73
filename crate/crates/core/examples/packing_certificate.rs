//! A certified lower bound V* on the packing volume for Q(ζ_16), checked
//! against Monte Carlo.

use ilz::arakelov::mean_count_mc;
use ilz::cyclo_field::create_field;
use ilz::packing::{certified_volume_bound, default_margin};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = create_field(16)?;
    let margin = default_margin(&k);
    let cert = certified_volume_bound(&k, margin)?;
    println!("{}", serde_json::to_string_pretty(&cert)?);
    println!("certificate inequality holds: {}", cert.holds());
    let mc = mean_count_mc(&k, cert.v_star, 100_000, 1)?;
    println!(
        "MC mean count at V*: {:.4} ± {:.4} (gap at {:.4})",
        mc.mean,
        mc.stderr,
        1.0 + k.n() as f64 - margin / 2.0
    );
    Ok(())
}
