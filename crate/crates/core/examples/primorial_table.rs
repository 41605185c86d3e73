//! Dimensions φ(n) reached by primorial conductors, where n/φ(n) grows like log log n.

use ilz::packing::primorial_table;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3} {:>20} {:>18} {:>8} {:>16}", "k", "n", "phi(n)", "n/phi", "phi loglog phi");
    for row in primorial_table(15)? {
        println!(
            "{:>3} {:>20} {:>18} {:>8.4} {:>16.4e}",
            row.k, row.n, row.phi, row.n_over_phi, row.phi_log_log_phi
        );
    }
    Ok(())
}
