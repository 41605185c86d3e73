//! Lattice packing lower bounds from the mean-count formula.
//!
//! Counts of an ideal lattice of Q(ζ_n) in a centred ball lie in 1 + nZ_{≥0},
//! since the torsion units ±ζ^k act freely on nonzero vectors. If the mean
//! count 1 + V + ε is below 1 + n, some lattice has count exactly 1, so its
//! packing admits a ball of volume V and the packing constant c_d is at least V.

use crate::arith::first_primes;
use crate::cyclo_field::CyclotomicField;
use crate::error::{Error, Result};
use crate::hecke::{ErrorTermEngine, ErrorTermResult, DEFAULT_SIGMA, DEFAULT_T};

/// Stark's constant in res ζ_K ≥ c_1 / (deg K · |Δ_K|^{1/deg K}).
pub const STARK_C1: f64 = 0.001448;
/// Largest k for which the k-th primorial fits in 64 bits.
pub const PRIMORIAL_K_MAX: usize = 15;

/// Default margin below the mod-n gap: 1% of n.
pub fn default_margin(field: &CyclotomicField) -> f64 {
    0.01 * field.n() as f64
}

/// Everything needed to re-check a volume bound.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct VolumeCertificate {
    pub n: u64,
    pub degree: usize,
    pub margin: f64,
    pub v_star: f64,
    pub epsilon: f64,
    pub quad_error_est: f64,
    pub tail_bound: f64,
    pub sigma: f64,
    #[serde(rename = "T")]
    pub t_max: f64,
    /// n − margin − (V* + |ε| + quad_error_est + tail_bound) ≥ 0.
    pub slack: f64,
    pub kind: &'static str,
}

impl VolumeCertificate {
    /// Recompute the inequality from the stored components.
    pub fn holds(&self) -> bool {
        self.v_star + self.epsilon.abs() + self.quad_error_est + self.tail_bound <= self.n as f64 - self.margin
    }
}

fn budget_used(volume: f64, r: &ErrorTermResult) -> f64 {
    volume + r.epsilon.abs() + r.quad_error_est + r.tail_bound
}

/// Largest V with V + |ε(V)| + quad_error_est + tail_bound ≤ n − margin,
/// resolved to 1e−4·n, using the default σ and T.
pub fn certified_volume_bound(field: &CyclotomicField, margin: f64) -> Result<VolumeCertificate> {
    certified_volume_bound_with(field, margin, DEFAULT_SIGMA, DEFAULT_T)
}

pub fn certified_volume_bound_with(
    field: &CyclotomicField,
    margin: f64,
    sigma: f64,
    t_max: f64,
) -> Result<VolumeCertificate> {
    if field.r2() < 4 {
        return Err(Error::InsufficientDecay(field.r2()));
    }
    if !(margin >= 0.0) {
        return Err(Error::InvalidArgument(format!("margin {margin} must be non-negative")));
    }
    let nf = field.n() as f64;
    let limit = nf - margin;
    let resolution = 1e-4 * nf;
    let v_min = resolution;
    let engine = ErrorTermEngine::new(field, sigma, t_max, (v_min, nf))?;
    let ok = |v: f64| budget_used(v, &engine.evaluate(v)) <= limit;

    if !ok(v_min) {
        return Err(Error::NoPositiveBound(budget_used(v_min, &engine.evaluate(v_min))));
    }
    // scan for the last admissible grid point, then bisect against its successor
    const GRID: usize = 400;
    let grid = |k: usize| v_min + (limit - v_min) * k as f64 / GRID as f64;
    let mut lo = v_min;
    let mut hi = None;
    for k in 1..=GRID {
        let v = grid(k);
        if ok(v) {
            lo = v;
            hi = None;
        } else if hi.is_none() {
            hi = Some(v);
        }
    }
    if let Some(mut hi) = hi {
        while hi - lo > resolution {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let r = engine.evaluate(lo);
    Ok(VolumeCertificate {
        n: field.n(),
        degree: field.degree(),
        margin,
        v_star: lo,
        epsilon: r.epsilon,
        quad_error_est: r.quad_error_est,
        tail_bound: r.tail_bound,
        sigma,
        t_max,
        slack: limit - budget_used(lo, &r),
        kind: "numerical: quadrature error estimate and heuristic zeta tail, not a formal proof",
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PrimorialRow {
    pub k: usize,
    pub n: u64,
    pub phi: u64,
    pub n_over_phi: f64,
    pub phi_log_log_phi: f64,
}

/// Dimensions φ(n) for n the product of the first k primes, k = 1..=k_max.
pub fn primorial_table(k_max: usize) -> Result<Vec<PrimorialRow>> {
    if k_max > PRIMORIAL_K_MAX {
        return Err(Error::Overflow(format!(
            "primorial of the first {k_max} primes exceeds 64 bits (k_max ≤ {PRIMORIAL_K_MAX})"
        )));
    }
    let primes = first_primes(k_max);
    let (mut n, mut phi) = (1u64, 1u64);
    let mut rows = Vec::with_capacity(k_max);
    for (i, &p) in primes.iter().enumerate() {
        n = n.checked_mul(p).ok_or_else(|| Error::Overflow(format!("primorial k = {}", i + 1)))?;
        phi *= p - 1;
        let pf = phi as f64;
        rows.push(PrimorialRow {
            k: i + 1,
            n,
            phi,
            n_over_phi: n as f64 / pf,
            phi_log_log_phi: pf * pf.ln().ln(),
        });
    }
    Ok(rows)
}

/// c_1 / (d · |Δ|^{1/d}).
pub fn stark_floor(field: &CyclotomicField) -> f64 {
    let d = field.degree() as f64;
    STARK_C1 / (d * (field.log_abs_disc() / d).exp())
}

/// Check that the computed residue respects Stark's floor; returns (residue, floor).
pub fn stark_check(field: &CyclotomicField) -> (f64, f64) {
    (crate::zeta::residue_at_one(field), stark_floor(field))
}

/// φ(n) by trial division, the reference for the table.
pub fn sieve_phi(n: u64) -> u64 {
    (1..=n).filter(|&a| num_integer::gcd(a, n) == 1).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arakelov::DEFAULT_ALLOWLIST;
    use crate::arith::euler_phi;
    use crate::cyclo_field::create_field;

    #[test]
    fn primorial_examples() {
        let rows = primorial_table(5).unwrap();
        assert_eq!((rows[2].n, rows[2].phi), (30, 8));
        assert!((rows[2].n_over_phi - 3.75).abs() < 1e-15);
        assert_eq!((rows[4].n, rows[4].phi), (2310, 480));
        let rows = primorial_table(15).unwrap();
        assert!(rows.windows(2).all(|w| w[1].n_over_phi > w[0].n_over_phi));
        assert_eq!(rows[14].n, 614_889_782_588_491_410);
        assert!(matches!(primorial_table(16), Err(Error::Overflow(_))));
        for row in &rows[..6] {
            assert_eq!(euler_phi(row.n), sieve_phi(row.n));
        }
    }

    #[test]
    fn stark_floor_examples() {
        let k = create_field(4).unwrap();
        assert!((stark_floor(&k) - 0.000362).abs() < 1e-15);
        for n in DEFAULT_ALLOWLIST {
            let k = create_field(n).unwrap();
            let (res, floor) = stark_check(&k);
            assert!(floor > 0.0 && res >= floor, "n={n}");
        }
    }

    #[test]
    fn certificate_for_conductor_16() {
        let k = create_field(16).unwrap();
        let cert = certified_volume_bound(&k, default_margin(&k)).unwrap();
        assert!(cert.v_star > 0.0 && cert.v_star < 16.0, "{cert:?}");
        assert!(cert.holds() && cert.slack >= 0.0);
        let doubled = certified_volume_bound_with(&k, default_margin(&k), DEFAULT_SIGMA, 2.0 * DEFAULT_T).unwrap();
        assert!(doubled.v_star >= cert.v_star - 1e-6, "{cert:?} {doubled:?}");
        assert_eq!(
            certified_volume_bound(&create_field(4).unwrap(), 0.04).unwrap_err(),
            Error::InsufficientDecay(1)
        );
    }
}
