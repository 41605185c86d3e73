//! The scaled upper incomplete gamma function G(a, x) = Γ(a, x) x^{−a} for
//! complex a and real x > 0, as needed by theta-function splittings.
//!
//! Regimes: a continued fraction for large x, the power series for small x,
//! and for a near a non-positive integer −m a cancellation-free series at
//! a + m followed by downward recurrence.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::gamma::log_gamma;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const CF_THRESHOLD: f64 = 1.5;
const TOL: f64 = 1e-16;
const MAX_ITER: usize = 5000;

/// (e^w − 1)/w, equal to 1 at w = 0.
pub(crate) fn exprel(w: Complex64) -> Complex64 {
    if w.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..40 {
            term = term * w / k as f64;
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (w.exp() - 1.0) / w
    }
}

/// ζ(k) for k = 2..=63, used by the Taylor series of log Γ(1 + b).
fn zeta_integers() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..64)
            .map(|k| {
                if k < 2 {
                    f64::NAN
                } else {
                    crate::zeta::riemann_zeta(Complex64::new(k as f64, 0.0))
                        .expect("k ≥ 2")
                        .re
                }
            })
            .collect()
    })
}

/// log Γ(1 + b) / b for |b| < 1/2, from
/// log Γ(1 + b) = −γ b + Σ_{k≥2} (−1)^k ζ(k) b^k / k.
fn log_gamma_1p_over_b(b: Complex64) -> Complex64 {
    let z = zeta_integers();
    let mut sum = Complex64::new(-EULER_GAMMA, 0.0);
    let mut p = b; // b^{k−1}
    for (k, &zk) in z.iter().enumerate().skip(2) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = p * (sign * zk / k as f64);
        sum += term;
        if term.norm() < 1e-18 {
            break;
        }
        p *= b;
    }
    sum
}

/// Γ(b, x) for |b| < 1/2 without cancellation at b = 0:
/// Γ(b, x) = (Γ(1+b) − 1)/b − (x^b − 1)/b − Σ_{k≥1} (−1)^k x^{b+k} / (k! (b+k)).
fn upper_gamma_near_zero(b: Complex64, x: f64) -> Complex64 {
    let lb = log_gamma_1p_over_b(b);
    let gamma_part = lb * exprel(lb * b);
    let lnx = x.ln();
    let power_part = exprel(b * lnx) * lnx;
    let xb = (b * lnx).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut xk_over_fact = 1.0;
    for k in 1..MAX_ITER {
        xk_over_fact *= -x / k as f64;
        let term = xb * xk_over_fact / (b + k as f64);
        sum += term;
        if term.norm() < TOL * sum.norm().max(1e-300) {
            break;
        }
    }
    gamma_part - power_part - sum
}

/// G(a, x) = Γ(a) x^{−a} − e^{−x} Σ_{k≥0} x^k / (a(a+1)…(a+k)).
fn scaled_series(a: Complex64, x: f64) -> Complex64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    for k in 1..MAX_ITER {
        term = term * x / (a + k as f64);
        sum += term;
        if term.norm() < TOL * sum.norm() {
            break;
        }
    }
    let full = (log_gamma(a).expect("a away from poles") - a * x.ln()).exp();
    full - sum * (-x).exp()
}

/// G(a, x) = e^{−x} / (x + 1 − a − 1(1−a)/(x + 3 − a − 2(2−a)/(x + 5 − a − …))),
/// evaluated by the modified Lentz method.
fn scaled_continued_fraction(a: Complex64, x: f64) -> Complex64 {
    let tiny = 1e-300;
    let mut b = Complex64::new(x + 1.0, 0.0) - a;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        let an = -(Complex64::new(fi, 0.0) - a) * fi;
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < TOL {
            break;
        }
    }
    h * (-x).exp()
}

/// Scaled upper incomplete gamma G(a, x) = Γ(a, x) · x^{−a}, x > 0.
pub fn scaled_upper_gamma(a: Complex64, x: f64) -> Complex64 {
    assert!(x > 0.0, "scaled incomplete gamma needs x > 0, got {x}");
    if x >= CF_THRESHOLD && x > a.re + 1.0 {
        return scaled_continued_fraction(a, x);
    }
    let m = (-a.re).round().max(0.0);
    let b = a + m;
    if b.norm() >= 0.5 {
        return scaled_series(a, x);
    }
    // G(b, x) then G(c − 1, x) = (x G(c, x) − e^{−x}) / (c − 1)
    let mut g = upper_gamma_near_zero(b, x) * (-b * x.ln()).exp();
    let ex = (-x).exp();
    let mut c = b;
    for _ in 0..m as usize {
        c -= 1.0;
        g = (g * x - ex) / c;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// ∫_x^∞ t^{a−1} e^{−t} dt · x^{−a} by substitution t = x e^u and a
    /// trapezoid rule in u (doubly exponential decay of the integrand) with
    /// the leading endpoint correction h²/12 · f'(0).
    fn quadrature_oracle(a: Complex64, x: f64) -> Complex64 {
        let h = 1e-3;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut k = 0usize;
        loop {
            let u = k as f64 * h;
            let t = x * u.exp();
            // t^{a} e^{−t} x^{−a} = e^{a u} e^{−t}
            let f = (a * u).exp() * (-t).exp();
            let w = if k == 0 { 0.5 } else { 1.0 };
            acc += f * w;
            if t > x + 800.0 || (u > 1.0 && f.norm() < 1e-40) {
                break;
            }
            k += 1;
        }
        acc * h + (a - x) * (-x).exp() * (h * h / 12.0)
    }

    #[test]
    fn closed_forms() {
        // G(1, x) = e^{−x}/x
        for x in [0.1, 1.0, 1.5, 7.0, 40.0] {
            let g = scaled_upper_gamma(c(1.0, 0.0), x);
            assert!((g.re - (-x).exp() / x).abs() < 1e-14 * (-x).exp() / x, "x={x}");
        }
        // E1(1) = 0.21938393439552027
        let e1 = scaled_upper_gamma(c(0.0, 0.0), 1.0);
        assert!((e1.re - 0.219_383_934_395_520_27).abs() < 1e-14);
        let e1 = scaled_upper_gamma(c(0.0, 0.0), 0.25);
        assert!((e1.re - 1.044_282_634_443_738_2).abs() < 1e-13);
        // Γ(−1, x) = e^{−x}/x − E1(x)
        let x = 0.7;
        let g = scaled_upper_gamma(c(-1.0, 0.0), x);
        let gm1 = (-x).exp() / x - scaled_upper_gamma(c(0.0, 0.0), x).re;
        assert!((g.re - gm1 * x).abs() < 1e-13);
    }

    #[test]
    fn matches_quadrature_across_regimes() {
        for &(a, x) in &[
            (c(2.5, 0.0), 0.3),
            (c(2.5, 0.0), 4.0),
            (c(-3.0, 0.0), 0.2),
            (c(-3.0, 0.0), 2.0),
            (c(-2.2, 1.0), 1.0),
            (c(0.1, -3.0), 1.2),
            (c(6.0, 20.0), 3.0),
            (c(-0.49, 0.0), 1.4),
            (c(1e-7, 0.0), 0.5),
        ] {
            let g = scaled_upper_gamma(a, x);
            let o = quadrature_oracle(a, x);
            assert!((g - o).norm() < 1e-9 * (1.0 + o.norm()), "a={a} x={x}: {g} vs {o}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn recurrence(re in -12.0f64..12.0, im in -10.0f64..10.0, x in 0.01f64..30.0) {
            let a = c(re, im);
            prop_assume!(a.norm() > 1e-6);
            let lhs = scaled_upper_gamma(a + 1.0, x) * x;
            let rhs = scaled_upper_gamma(a, x) * a + (-x).exp();
            let scale = lhs.norm() + (-x).exp() + (scaled_upper_gamma(a, x) * a).norm();
            prop_assert!((lhs - rhs).norm() < 1e-11 * scale, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn continuous_at_regime_switch(re in -4.0f64..0.4, im in -3.0f64..3.0) {
            let a = c(re, im);
            let below = scaled_upper_gamma(a, CF_THRESHOLD * (1.0 - 1e-12));
            let above = scaled_upper_gamma(a, CF_THRESHOLD);
            prop_assert!((below - above).norm() < 1e-10 * above.norm());
        }

        #[test]
        fn near_integer_orders(m in 0u32..6, eps in -1e-4f64..1e-4, x in 0.05f64..1.4) {
            let a = c(-(m as f64) + eps, 0.0);
            let g = scaled_upper_gamma(a, x);
            let o = quadrature_oracle(a, x);
            prop_assert!((g - o).norm() < 1e-9 * (1.0 + o.norm()));
        }
    }
}
