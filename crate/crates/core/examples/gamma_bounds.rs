//! The fitted constant C in |Γ(1/2+it)|^r/|Γ(r(1/2+it))| ≤ e^{−(r/2)log r + Cr}/(|t|+1)^{(r−1)/2}
//! and how tight the bound is.

use ilz::gamma::{gamma_ratio_abs, gamma_ratio_bound, GammaRatioBoundConfig};

fn main() {
    let cfg = GammaRatioBoundConfig::default();
    println!("C = {} (raw max {:.6} at r={}, t={})", cfg.c, cfg.raw_max, cfg.argmax.0, cfg.argmax.1);
    println!("worst excess on the fit grid: {:.3e}", cfg.worst_excess(64, 100.0, 0.1));
    for r in [1u32, 2, 4, 8, 16] {
        let ratios: Vec<String> = [0.0, 1.0, 10.0, 100.0]
            .iter()
            .map(|&t| format!("{:.3}", gamma_ratio_abs(r, t) / gamma_ratio_bound(r, t, &cfg)))
            .collect();
        println!("r={r:>2}: ratio/bound at t=0,1,10,100: {}", ratios.join(", "));
    }
}
