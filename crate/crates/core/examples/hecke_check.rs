//! Average of E(Λ, d s) over random ideal lattices against the closed form.

use ilz::cyclo_field::create_field;
use ilz::hecke::{hecke_lhs_mc, hecke_rhs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [4u64, 5, 8, 12] {
        let k = create_field(n)?;
        for s in [2.0, 3.0] {
            let rhs = hecke_rhs(&k, s)?;
            let lhs = hecke_lhs_mc(&k, s, 2000, 11)?;
            println!(
                "n={n:>2} s={s}: closed form {rhs:.8}, Monte Carlo {:.8} ± {:.2e}",
                lhs.mean, lhs.stderr
            );
        }
    }
    Ok(())
}
