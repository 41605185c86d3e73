//! Degree, discriminant, conductors and unit data for a few cyclotomic fields.

use ilz::arakelov::{arakelov_volume, log_unit_basis};
use ilz::cyclo_field::create_field;
use ilz::zeta::DedekindZeta;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>4} {:>3} {:>3} {:>24} {:>12} {:>14}", "n", "d", "r2", "|disc|", "regulator", "vol(Ar)");
    for n in [3u64, 4, 5, 8, 12, 15, 16, 20, 24] {
        let k = create_field(n)?;
        let basis = log_unit_basis(&k)?;
        let conductors: Vec<u64> = DedekindZeta::new(&k)?.characters().iter().map(|c| c.conductor()).collect();
        println!(
            "{:>4} {:>3} {:>3} {:>24} {:>12.6} {:>14.6}   conductors {:?}",
            n,
            k.degree(),
            k.r2(),
            k.abs_disc().to_string(),
            basis.regulator_like,
            arakelov_volume(&k, &basis),
            conductors
        );
    }
    Ok(())
}
