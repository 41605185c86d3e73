//! Complex log-gamma, exact gamma ratios on the critical line, the
//! exponential-decay bound for those ratios, and the Mellin transform of the
//! indicator of [0, R].

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// B_{2k} / (2k(2k−1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const STIRLING_MIN_ABS: f64 = 15.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// log sin(πz) on a branch that is continuous along vertical lines and safe
/// against overflow for large |Im z|.
fn log_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    // sin(πz) = e^{−iπz} (1 − e^{2iπz}) · i/2; the exponential is ≤ 1 in size
    if z.im >= 0.0 {
        let w = (2.0 * PI * i * z).exp();
        -i * PI * z + (Complex64::new(1.0, 0.0) - w).ln() + Complex64::new(-LN_2, PI / 2.0)
    } else {
        log_sin_pi(z.conj()).conj()
    }
}

/// Principal-branch log Γ(z) (the analytic continuation that is real on the
/// positive real axis), by Stirling's series after upward recurrence, with
/// reflection for Re z < 1/2.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::PoleAtNonPositiveInteger(z.re as i64));
    }
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let one_minus = Complex64::new(1.0, 0.0) - z;
        return Ok(Complex64::new(PI.ln(), 0.0) - log_sin_pi(z) - log_gamma(one_minus)?);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < STIRLING_MIN_ABS {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for &c in &STIRLING {
        series += p * c;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift)
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(|l| l.exp())
}

/// log cosh(y) without overflow.
fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// log(sinh(y)/y), equal to 0 at y = 0.
fn ln_sinhc(y: f64) -> f64 {
    let a = y.abs();
    if a < 1e-4 {
        a * a / 6.0
    } else {
        a + (-(-2.0 * a).exp()).ln_1p() - LN_2 - a.ln()
    }
}

/// log |Γ(1/2 + it)|^r / |Γ(r(1/2 + it))| via the closed-form products
///
/// |Γ(1/2+it)|² = π / cosh(πt),
/// |Γ(m+ix)|²     = (πx / sinh(πx)) ∏_{k=1}^{m−1} (k² + x²)            (r = 2m),
/// |Γ(m+1/2+ix)|² = (π / cosh(πx))  ∏_{k=0}^{m−1} ((k+1/2)² + x²)      (r = 2m+1),
///
/// with x = rt.
pub fn log_gamma_ratio_abs(r: u32, t: f64) -> f64 {
    assert!(r >= 1, "gamma ratio needs r ≥ 1");
    if r == 1 {
        return 0.0;
    }
    let rf = r as f64;
    let x = rf * t;
    let numerator_sq = PI.ln() - ln_cosh(PI * t);
    let m = r / 2;
    let denominator_sq = if r % 2 == 0 {
        let prod: f64 = (1..m).map(|k| ((k * k) as f64 + x * x).ln()).sum();
        prod - ln_sinhc(PI * x)
    } else {
        let prod: f64 = (0..m)
            .map(|k| {
                let h = k as f64 + 0.5;
                (h * h + x * x).ln()
            })
            .sum();
        PI.ln() - ln_cosh(PI * x) + prod
    };
    0.5 * (rf * numerator_sq - denominator_sq)
}

/// |Γ(1/2 + it)|^r / |Γ(r(1/2 + it))|.
pub fn gamma_ratio_abs(r: u32, t: f64) -> f64 {
    log_gamma_ratio_abs(r, t).exp()
}

/// The constant C of the bound
/// |Γ(1/2+it)|^r / |Γ(r(1/2+it))| ≤ e^{−(1/2) r log r + C r} / (|t|+1)^{(r−1)/2},
/// fitted on a finite grid.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GammaRatioBoundConfig {
    #[serde(rename = "C")]
    pub c: f64,
    pub fitted_over: String,
    /// Unrounded maximum over the grid.
    pub raw_max: f64,
    /// Grid point attaining the maximum.
    pub argmax: (u32, f64),
}

impl GammaRatioBoundConfig {
    /// Fit C over r ∈ 1..=r_max and t ∈ {0, dt, 2dt, …, t_max}, rounded up
    /// to two decimals.
    pub fn fit(r_max: u32, t_max: f64, dt: f64) -> Self {
        Self::fit_range(1, r_max, 0.0, t_max, dt)
    }

    /// Fit C for a single r on the window t ∈ [t_min, t_max], the sharpest
    /// constant for bounding a tail ∫_{t_min}^∞.
    pub fn fit_window(r: u32, t_min: f64, t_max: f64, dt: f64) -> Self {
        Self::fit_range(r, r, t_min, t_max, dt)
    }

    fn fit_range(r_min: u32, r_max: u32, t_min: f64, t_max: f64, dt: f64) -> Self {
        let steps = ((t_max - t_min) / dt).round() as usize;
        let mut best = (f64::NEG_INFINITY, (r_min, t_min));
        for r in r_min..=r_max {
            for i in 0..=steps {
                let t = t_min + i as f64 * dt;
                let v = normalized_log_ratio(r, t);
                if v > best.0 {
                    best = (v, (r, t));
                }
            }
        }
        let c = (best.0 * 100.0 - 1e-9).ceil() / 100.0;
        Self {
            c,
            fitted_over: format!("r in {r_min}..={r_max}, t in [{t_min}, {t_max}] step {dt}"),
            raw_max: best.0,
            argmax: best.1,
        }
    }

    /// Largest violation ratio/bound − 1 on a grid; ≤ 0 means the bound holds.
    pub fn worst_excess(&self, r_max: u32, t_max: f64, dt: f64) -> f64 {
        let steps = (t_max / dt).round() as usize;
        let mut worst = f64::NEG_INFINITY;
        for r in 1..=r_max {
            for i in 0..=steps {
                let t = i as f64 * dt;
                let e = log_gamma_ratio_abs(r, t) - log_gamma_ratio_bound(r, t, self);
                worst = worst.max(e);
            }
        }
        worst
    }
}

impl Default for GammaRatioBoundConfig {
    /// The fit on r ∈ 1..=64, t ∈ {0, 0.1, …, 100}.
    fn default() -> Self {
        Self::fit(64, 100.0, 0.1)
    }
}

/// (log ratio + (1/2) r log r + ((r−1)/2) log(|t|+1)) / r.
fn normalized_log_ratio(r: u32, t: f64) -> f64 {
    let rf = r as f64;
    (log_gamma_ratio_abs(r, t) + 0.5 * rf * rf.ln() + 0.5 * (rf - 1.0) * (t.abs() + 1.0).ln()) / rf
}

pub fn log_gamma_ratio_bound(r: u32, t: f64, cfg: &GammaRatioBoundConfig) -> f64 {
    let rf = r as f64;
    -0.5 * rf * rf.ln() + cfg.c * rf - 0.5 * (rf - 1.0) * (t.abs() + 1.0).ln()
}

/// e^{−(1/2) r log r + C r} / (|t|+1)^{(r−1)/2}.
pub fn gamma_ratio_bound(r: u32, t: f64, cfg: &GammaRatioBoundConfig) -> f64 {
    log_gamma_ratio_bound(r, t, cfg).exp()
}

/// Mellin transform of 1_{[0,R]}: R^s / s.
pub fn mellin_indicator(radius: f64, s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(0.0, 0.0) {
        return Err(Error::PoleAtZero);
    }
    Ok((s * radius.ln()).exp() / s)
}

/// R^r e^{−(1/2) r log r + C r} / (|t|+1)^{(r+1)/2}.
pub fn integrand_envelope(r: u32, radius: f64, t: f64, cfg: &GammaRatioBoundConfig) -> f64 {
    let rf = r as f64;
    (rf * radius.ln() - 0.5 * rf * rf.ln() + cfg.c * rf - 0.5 * (rf + 1.0) * (t.abs() + 1.0).ln()).exp()
}

/// ∫_T^∞ integrand_envelope dt = envelope(T) · (T+1) · 2/(r−1), for r ≥ 2.
pub fn integrand_envelope_tail(r: u32, radius: f64, t: f64, cfg: &GammaRatioBoundConfig) -> f64 {
    assert!(r >= 2, "envelope is not integrable for r = 1");
    integrand_envelope(r, radius, t, cfg) * (t.abs() + 1.0) * 2.0 / (r as f64 - 1.0)
}

/// The exact integrand |M1_{[0,R]}(2r(1/2+it)) · 2^{−(1/2+it)r} · Γ(1/2+it)^r / Γ(r(1/2+it))|
/// that the envelope dominates.
pub fn exact_integrand_abs(r: u32, radius: f64, t: f64) -> f64 {
    let rf = r as f64;
    let s = Complex64::new(rf, 2.0 * rf * t);
    let mellin = mellin_indicator(radius, s).expect("s ≠ 0");
    mellin.norm() * (-0.5 * rf * LN_2).exp() * gamma_ratio_abs(r, t)
}
