//! The continued Epstein zeta function and its functional equation
//! E*(Λ, s) = E*(Λ*, d − s) on a random unit-covolume lattice.

use ilz::epstein::{epstein_continued, epstein_direct, functional_equation_residual, LatticeGram};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = 4;
    let b: DMatrix<f64> = DMatrix::from_fn(d, d, |i, j| rng.gen_range(-0.5..0.5) + if i == j { 1.0 } else { 0.0 });
    let det = b.determinant().abs();
    let lattice = LatticeGram::from_basis(&(b / det.powf(1.0 / d as f64)))?;
    println!("covolume = {:.15}", lattice.covolume());

    let s = Complex64::new(6.0, 0.0);
    let direct = epstein_direct(&lattice, s, 25.0)?;
    println!("E(L, 6) continued = {:.12}", epstein_continued(&lattice, s)?.re);
    println!("E(L, 6) direct    = {:.12} (tail estimate {:.1e})", direct.value.re, direct.tail_estimate.re);

    for s in [Complex64::new(1.3, 0.0), Complex64::new(2.0, 5.0), Complex64::new(-3.0, 1.0)] {
        println!("s = {s}: E = {:.10}, residual = {:.2e}", epstein_continued(&lattice, s)?, functional_equation_residual(&lattice, s)?);
    }
    Ok(())
}
