//! Gauss–Legendre rules and composite panels on an interval.

use std::f64::consts::PI;

/// Nodes and weights of the m-point Gauss–Legendre rule on [−1, 1], by
/// Newton iteration on P_m from the Chebyshev-like initial guesses.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..(m + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_m(x) and P_{m−1}(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[m - 1 - i] = -x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite rule on [a, b] with `panels` equal panels of an m-point rule.
pub fn composite_nodes(a: f64, b: f64, panels: usize, m: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(m);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * m);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for m in [1usize, 2, 5, 10, 16] {
            let (x, w) = gauss_legendre(m);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for k in 0..(2 * m) {
                let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn composite_oscillatory() {
        let nodes = composite_nodes(0.0, 60.0, 200, 10);
        let approx: f64 = nodes.iter().map(|(t, w)| w * (7.0 * t).cos()).sum();
        assert!((approx - (420.0f64).sin() / 7.0).abs() < 1e-13);
    }
}
