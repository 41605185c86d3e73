//! Epstein zeta function E(Λ, s) = Σ_{v ∈ Λ∖0} q(v)^{−s/2} of a lattice given
//! by its Gram matrix: direct summation, the theta-splitting continuation,
//! the completed function and its functional equation.
//!
//! With θ(t) = Σ_v e^{−π t q(v)} and Poisson summation
//! θ_Λ(t) = covol^{−1} t^{−d/2} θ_{Λ*}(1/t), splitting the Mellin integral at
//! t = 1 gives
//!
//! π^{−s/2} Γ(s/2) E(Λ, s) = Σ_{v≠0} G(s/2, π q(v)) + covol^{−1} Σ_{w≠0} G((d−s)/2, π q*(w))
//!                           + 2 / (covol (s − d)) − 2/s,
//!
//! where G(a, x) = Γ(a, x) x^{−a}.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::enumerate::Enumerator;
use crate::error::{Error, Result};
use crate::gamma::log_gamma;
use crate::incgamma::scaled_upper_gamma;

/// Relative size of the last enumerated shell at which theta sums stop.
pub const THETA_TOLERANCE: f64 = 1e-14;

/// Positive-definite Gram matrix together with its enumeration data.
#[derive(Debug, Clone)]
pub struct LatticeGram {
    enumerator: Enumerator,
    covolume: f64,
}

impl LatticeGram {
    pub fn new(gram: DMatrix<f64>) -> Result<Self> {
        let d = gram.nrows();
        if gram.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: gram.ncols() });
        }
        let scale = gram.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        for i in 0..d {
            for j in 0..i {
                if (gram[(i, j)] - gram[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        let sym = (&gram + gram.transpose()) * 0.5;
        let enumerator = Enumerator::new(&sym)?;
        let covolume = sym
            .clone()
            .cholesky()
            .ok_or(Error::NotPositiveDefinite)?
            .l()
            .diagonal()
            .iter()
            .product::<f64>();
        Ok(Self { enumerator, covolume })
    }

    /// Gram matrix from `d` rows given in row-major order.
    pub fn from_rows(d: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, got: entries.len() });
        }
        Self::new(DMatrix::from_row_slice(d, d, entries))
    }

    /// Gram matrix of the lattice spanned by the rows of `basis`.
    pub fn from_basis(basis: &DMatrix<f64>) -> Result<Self> {
        Self::new(basis * basis.transpose())
    }

    pub fn dim(&self) -> usize {
        self.enumerator.dim()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        self.enumerator.gram()
    }

    pub fn covolume(&self) -> f64 {
        self.covolume
    }

    pub fn enumerator(&self) -> &Enumerator {
        &self.enumerator
    }

    /// The lattice with Gram matrix c · G.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.gram() * c)
    }
}

/// Gram matrix of the dual lattice: the inverse Gram matrix.
pub fn dual_gram(lattice: &LatticeGram) -> LatticeGram {
    let inv = lattice
        .gram()
        .clone()
        .cholesky()
        .expect("Gram matrix was validated as positive definite")
        .inverse();
    LatticeGram::new((&inv + inv.transpose()) * 0.5).expect("inverse of a positive-definite matrix")
}

/// π^{d/2} / Γ(d/2 + 1).
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    (h * std::f64::consts::PI.ln() - log_gamma(Complex64::new(h + 1.0, 0.0)).unwrap().re).exp()
}

/// Truncated lattice sum together with its integral tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectSum {
    /// Partial sum plus tail estimate.
    pub value: Complex64,
    /// d V_d / covol · R^{d−s} / (s − d).
    pub tail_estimate: Complex64,
    pub n_vectors: u64,
}

/// Σ_{0 < q(v) ≤ R²} q(v)^{−s/2} plus the integral tail estimate.
pub fn epstein_direct(lattice: &LatticeGram, s: Complex64, cutoff_radius: f64) -> Result<DirectSum> {
    let d = lattice.dim() as f64;
    if s.re <= d {
        return Err(Error::DivergentRegion { re: s.re, dim: d });
    }
    let mut partial = Complex64::new(0.0, 0.0);
    let mut n = 0u64;
    let half_s = -s * 0.5;
    lattice.enumerator().for_each(cutoff_radius * cutoff_radius, true, |_, q| {
        partial += (half_s * q.ln()).exp();
        n += 1;
    });
    let tail = d * unit_ball_volume(lattice.dim()) / lattice.covolume()
        * ((d - s) * cutoff_radius.ln()).exp()
        / (s - d);
    Ok(DirectSum { value: partial * 2.0 + tail, tail_estimate: tail, n_vectors: 2 * n })
}

/// Σ_{v≠0} G(a, π q(v)), growing the enumeration radius until the last
/// shell contributes less than `rel_tol` of the total.
pub fn theta_tail_sum(lattice: &LatticeGram, a: Complex64, rel_tol: f64) -> Complex64 {
    let pi = std::f64::consts::PI;
    let d = lattice.dim() as f64;
    // G(a, x) ~ e^{−x}/x and shells hold ~x^{d/2} points: solve
    // e^{−x} x^{d/2 − 1} ≈ rel_tol by a few fixed-point steps
    let mut x: f64 = 10.0;
    for _ in 0..8 {
        x = (-rel_tol.ln() + (0.5 * d - 1.0) * x.max(1.0).ln()).max(4.0);
    }
    // bring the scale to the lattice: the first shell sits near the minimum
    let floor = lattice.enumerator().min_norm() * pi;
    let step = 8.0;
    let mut outer = x.max(floor + step);
    loop {
        let inner = outer - step;
        let mut total = Complex64::new(0.0, 0.0);
        let mut shell = Complex64::new(0.0, 0.0);
        lattice.enumerator().for_each(outer / pi, true, |_, q| {
            let g = scaled_upper_gamma(a, pi * q);
            total += g;
            if pi * q > inner {
                shell += g;
            }
        });
        if shell.norm() <= rel_tol * total.norm() {
            return total * 2.0;
        }
        outer += step;
    }
}

/// π^{−s/2} Γ(s/2) E(Λ, s) by the theta splitting, with the theta sums
/// truncated at relative size `rel_tol`.
pub fn completed_epstein_any_covolume(lattice: &LatticeGram, s: Complex64, rel_tol: f64) -> Result<Complex64> {
    let d = lattice.dim();
    if s == Complex64::new(d as f64, 0.0) {
        return Err(Error::PoleAtD(d));
    }
    if s == Complex64::new(0.0, 0.0) {
        return Err(Error::PoleAtZero);
    }
    let c = lattice.covolume();
    let primal = theta_tail_sum(lattice, s * 0.5, rel_tol);
    let dual = theta_tail_sum(&dual_gram(lattice), (Complex64::new(d as f64, 0.0) - s) * 0.5, rel_tol);
    Ok(primal + dual / c + 2.0 / (c * (s - d as f64)) - 2.0 / s)
}

/// E(Λ, s) on C ∖ {d} with a configurable truncation tolerance.
pub fn epstein_continued_with_tolerance(lattice: &LatticeGram, s: Complex64, rel_tol: f64) -> Result<Complex64> {
    let d = lattice.dim();
    if s == Complex64::new(d as f64, 0.0) {
        return Err(Error::PoleAtD(d));
    }
    // 1/Γ(s/2) vanishes at s = 0, −2, −4, …; at s = 0 it cancels the −2/s term
    if s.im == 0.0 && s.re <= 0.0 && (s.re / 2.0).fract() == 0.0 {
        return Ok(Complex64::new(if s.re == 0.0 { -1.0 } else { 0.0 }, 0.0));
    }
    let bracket = completed_epstein_any_covolume(lattice, s, rel_tol)?;
    let half = s * 0.5;
    let factor = (half * std::f64::consts::PI.ln() - log_gamma(half)?).exp();
    Ok(bracket * factor)
}

/// E(Λ, s) analytically continued to C ∖ {d}.
pub fn epstein_continued(lattice: &LatticeGram, s: Complex64) -> Result<Complex64> {
    epstein_continued_with_tolerance(lattice, s, THETA_TOLERANCE)
}

/// E*(Λ, s) = π^{−s/2} Γ(s/2) E(Λ, s) for a unit-covolume lattice; satisfies
/// E*(Λ, s) = E*(Λ*, d − s).
pub fn completed_epstein(lattice: &LatticeGram, s: Complex64) -> Result<Complex64> {
    if (lattice.covolume() - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitCovolume(lattice.covolume()));
    }
    completed_epstein_any_covolume(lattice, s, THETA_TOLERANCE)
}

/// |E*(Λ, s) − E*(Λ*, d − s)| relative to the size of the values.
pub fn functional_equation_residual(lattice: &LatticeGram, s: Complex64) -> Result<f64> {
    let d = lattice.dim() as f64;
    let lhs = completed_epstein(lattice, s)?;
    let rhs = completed_epstein(&dual_gram(lattice), Complex64::new(d, 0.0) - s)?;
    Ok((lhs - rhs).norm() / (1.0 + lhs.norm()))
}
