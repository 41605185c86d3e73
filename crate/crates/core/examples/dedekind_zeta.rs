//! ζ_K(s) as a product of Dirichlet L-functions, with its residue at s = 1.

use ilz::cyclo_field::create_field;
use ilz::zeta::{riemann_zeta, DedekindZeta};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = create_field(5)?;
    let zeta = DedekindZeta::new(&k)?;
    for s in [Complex64::new(2.0, 0.0), Complex64::new(0.5, 14.0), Complex64::new(-1.5, 3.0)] {
        let (value, err) = zeta.eval_with_error(s)?;
        println!("zeta_K({s}) = {value:.12}  (est. error {err:.1e})");
    }
    println!("Res_(s=1) zeta_K = {:.12}", zeta.residue_at_one().re);
    // Q(zeta_4) = Q(i): zeta_K(s) = zeta(s) L(s, chi_4), and L(2, chi_4) is Catalan's constant
    let gauss = DedekindZeta::new(&create_field(4)?)?;
    let s = Complex64::new(2.0, 0.0);
    let catalan = gauss.eval(s)? / riemann_zeta(s)?;
    println!("L(2, chi_4) = {:.15} (Catalan 0.915965594177219)", catalan.re);
    Ok(())
}
