//! Hecke's integration formula over the Arakelov class group and the
//! contour-integral error term of the mean lattice-point count.
//!
//! For K = Q(ζ_n) with r1 = 0, d = 2 r2 and s > 1,
//!
//!   ∫_{Ar(K)} E(Λ, d s) dΛ = ζ_K(s) Δ^{s/2} (2π)^{r2} Γ(s)^{r2} / (vol(Ar) 2^{s r2} (d/2) Γ(s d/2)),
//!
//! with vol(Ar) = √Δ · Res_{s=1} ζ_K. Mellin inversion of the ball indicator
//! and a contour shift past s = 1 turn this into
//!
//!   E card(B_R ∩ Λ) = 1 + V + ε,
//!   ε = (2 (2π)^{r2} / (vol(Ar) π)) ∫_0^∞ Re F(σ + it) dt,
//!   F(s) = Δ^{s/2} ζ_K(s) R^{2 s r2}/(2 s r2) · Γ(s)^{r2} / (2^{s r2} Γ(s r2)).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arakelov::{radius_for_volume, ArakelovSampler, McEstimate};
use crate::cyclo_field::CyclotomicField;
use crate::epstein::{epstein_continued_with_tolerance, unit_ball_volume};
use crate::error::{Error, Result};
use crate::gamma::{integrand_envelope_tail, log_gamma, GammaRatioBoundConfig};
use crate::quadrature::composite_nodes;
use crate::zeta::DedekindZeta;

pub const DEFAULT_SIGMA: f64 = 0.5;
pub const DEFAULT_T: f64 = 60.0;
/// Truncation tolerance of the theta sums inside Monte Carlo averages,
/// far below the sampling noise.
pub const MC_THETA_TOLERANCE: f64 = 1e-9;

const GL_POINTS: usize = 10;
const QUAD_TOLERANCE: f64 = 1e-9;
const MAX_HALVINGS: usize = 6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// vol(Ar(K)) = √|Δ| · Res_{s=1} ζ_K(s).
pub fn arakelov_volume_from_residue(field: &CyclotomicField, zeta: &DedekindZeta) -> f64 {
    (0.5 * field.log_abs_disc()).exp() * zeta.residue_at_one().re
}

/// Closed-form right-hand side of the Hecke integration formula at real s > 1.
pub fn hecke_rhs(field: &CyclotomicField, s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::PoleAtOne);
    }
    if s < 1.0 {
        return Err(Error::DivergentRegion { re: s, dim: 1.0 });
    }
    let zeta = DedekindZeta::new(field)?;
    let zk = zeta.eval(c(s, 0.0))?.re;
    let r2 = field.r2() as f64;
    let d = field.degree() as f64;
    let log_vol = arakelov_volume_from_residue(field, &zeta).ln();
    let lg = |x: f64| log_gamma(c(x, 0.0)).map(|v| v.re);
    let log_rhs = zk.ln() + 0.5 * s * field.log_abs_disc() + r2 * (2.0 * PI).ln() + r2 * lg(s)?
        - log_vol
        - s * r2 * std::f64::consts::LN_2
        - (d / 2.0).ln()
        - lg(s * d / 2.0)?;
    Ok(log_rhs.exp())
}

/// Monte Carlo average of E(Λ, d s) over Haar-random unit-covolume ideal lattices.
pub fn hecke_lhs_mc(field: &CyclotomicField, s: f64, samples: usize, seed: u64) -> Result<McEstimate> {
    if s <= 1.0 {
        return Err(Error::DivergentRegion { re: s, dim: 1.0 });
    }
    let sampler = ArakelovSampler::new(field)?;
    let sd = c(s * field.degree() as f64, 0.0);
    Ok(sampler.estimate(samples, seed, |l| {
        epstein_continued_with_tolerance(&l.gram, sd, MC_THETA_TOLERANCE)
            .expect("d·s > d avoids the pole")
            .re
    }))
}

/// Output of the error-term quadrature.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ErrorTermResult {
    pub epsilon: f64,
    pub sigma: f64,
    #[serde(rename = "T")]
    pub t_max: f64,
    /// |ε(h) − ε(h/2)| at the final step size.
    pub quad_error_est: f64,
    /// Envelope bound of the truncated tail ∫_T^∞, with |ζ_K| extrapolated
    /// flatly from its maximum on [T, 2T] (heuristic).
    pub tail_bound: f64,
    pub n_nodes: usize,
    /// Imaginary part of the unfolded integral over [−T, T], scaled like ε.
    pub imag_part: f64,
    pub tail_is_heuristic: bool,
}

/// Quadrature values of A(s) = F(s) / X^s at σ ± it, where X = R^{2 r2}.
#[derive(Debug, Clone)]
struct Level {
    nodes: Vec<(f64, f64)>,
    plus: Vec<Complex64>,
    minus: Vec<Complex64>,
}

/// Error-term evaluator for one field, σ and T, reusable across volumes:
/// the V-dependence enters only through X^s.
#[derive(Debug, Clone)]
pub struct ErrorTermEngine {
    field_degree: usize,
    r2: usize,
    sigma: f64,
    t_max: f64,
    prefactor: f64,
    log_disc: f64,
    coarse: Level,
    fine: Level,
    zeta_tail_max: f64,
    /// max_{t ∈ [T, 2T]} |A(σ+it)|/|ζ_K| · (t+1)^{(r2+1)/2} / Δ^{σ/2}, used when σ ≠ 1/2
    gamma_tail_const: f64,
    gamma_cfg: GammaRatioBoundConfig,
}

fn check_hypotheses(field: &CyclotomicField, sigma: f64) -> Result<()> {
    if field.r2() < 4 {
        return Err(Error::InsufficientDecay(field.r2()));
    }
    if !(0.5..1.0).contains(&sigma) {
        return Err(Error::BadSigma(sigma));
    }
    Ok(())
}

/// log[Γ(s)^{r2} / (2 s r2 · 2^{s r2} Γ(s r2))].
fn log_gamma_factor(r2: usize, s: Complex64) -> Complex64 {
    let r = r2 as f64;
    log_gamma(s).expect("Re s > 0") * r
        - log_gamma(s * r).expect("Re s > 0")
        - (s * (2.0 * r)).ln()
        - s * (r * std::f64::consts::LN_2)
}

impl ErrorTermEngine {
    /// Engine accurate for volumes V with log X in [log_x_lo, log_x_hi].
    pub fn new(field: &CyclotomicField, sigma: f64, t_max: f64, volumes: (f64, f64)) -> Result<Self> {
        check_hypotheses(field, sigma)?;
        if !(t_max > 0.0) {
            return Err(Error::InvalidArgument(format!("truncation height T = {t_max} must be positive")));
        }
        let zeta = DedekindZeta::new(field)?;
        let r2 = field.r2();
        let d = field.degree();
        let vol = arakelov_volume_from_residue(field, &zeta);
        let prefactor = 2.0 * (2.0 * PI).powi(r2 as i32) / (vol * PI);
        let log_disc = field.log_abs_disc();

        // step bound π/(4ω) from the dominant phase velocities
        let log_r = |v: f64| radius_for_volume(d, v).ln().abs();
        let max_log_r = log_r(volumes.0).max(log_r(volumes.1));
        let phase = |t: f64| log_gamma_factor(r2, c(sigma, t)).im;
        let mut max_phase_deriv: f64 = 0.0;
        let mut t = 0.0;
        while t < t_max {
            max_phase_deriv = max_phase_deriv.max(((phase(t + 0.25) - phase(t)) / 0.25).abs());
            t += 0.25;
        }
        let omega = log_disc / 2.0 + 2.0 * r2 as f64 * max_log_r + max_phase_deriv;
        // a 10-point Gauss–Legendre panel resolves one full period to ~1e-9
        let h0 = (2.0 * PI / omega).min(2.0);
        let mut panels = (t_max / h0).ceil() as usize;

        let make_level = |panels: usize| -> Result<Level> {
            let nodes = composite_nodes(0.0, t_max, panels, GL_POINTS);
            let eval = |s: Complex64| -> Result<Complex64> {
                Ok(zeta.eval(s)? * (s * (0.5 * log_disc) + log_gamma_factor(r2, s)).exp())
            };
            let plus = nodes.par_iter().map(|&(t, _)| eval(c(sigma, t))).collect::<Result<Vec<_>>>()?;
            let minus = nodes.par_iter().map(|&(t, _)| eval(c(sigma, -t))).collect::<Result<Vec<_>>>()?;
            Ok(Level { nodes, plus, minus })
        };

        let mut coarse = make_level(panels)?;
        panels *= 2;
        let mut fine = make_level(panels)?;

        // |ζ_K| on [T, 2T] for the tail extrapolation
        let tail_grid: Vec<f64> = (0..=400).map(|k| t_max * (1.0 + k as f64 / 400.0)).collect();
        let zeta_tail_max = tail_grid
            .par_iter()
            .map(|&t| zeta.eval(c(sigma, t)).map(|z| z.norm()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let gamma_tail_const = tail_grid
            .iter()
            .map(|&t| {
                log_gamma_factor(r2, c(sigma, t)).re.exp() * (t + 1.0).powf((r2 as f64 + 1.0) / 2.0)
            })
            .fold(0.0, f64::max);

        let mut engine = Self {
            field_degree: d,
            r2,
            sigma,
            t_max,
            prefactor,
            log_disc,
            coarse: coarse.clone(),
            fine: fine.clone(),
            zeta_tail_max,
            gamma_tail_const,
            // the envelope constant fitted for this r2 on the tail window only
            gamma_cfg: GammaRatioBoundConfig::fit_window(r2 as u32, t_max, 2.0 * t_max, 0.1),
        };
        for _ in 0..MAX_HALVINGS {
            let converged = [volumes.0, volumes.1].iter().all(|&v| {
                let r = engine.evaluate(v);
                r.quad_error_est < QUAD_TOLERANCE * (1.0 + r.epsilon.abs())
            });
            if converged {
                break;
            }
            panels *= 2;
            coarse = fine;
            fine = make_level(panels)?;
            engine.coarse = coarse.clone();
            engine.fine = fine.clone();
        }
        Ok(engine)
    }

    fn integrate(&self, level: &Level, log_x: f64) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for ((&(t, w), a_plus), a_minus) in level.nodes.iter().zip(&level.plus).zip(&level.minus) {
            let up = a_plus * (c(self.sigma, t) * log_x).exp();
            let down = a_minus * (c(self.sigma, -t) * log_x).exp();
            acc += (up + down) * (0.5 * w);
        }
        acc
    }

    /// ε(V) with its error components.
    pub fn evaluate(&self, volume: f64) -> ErrorTermResult {
        let d = self.field_degree;
        let radius = radius_for_volume(d, volume);
        // X = R^{2 r2} = R^d = V / V_d
        let log_x = (volume / unit_ball_volume(d)).ln();
        let fine = self.integrate(&self.fine, log_x);
        let coarse = self.integrate(&self.coarse, log_x);
        let epsilon = self.prefactor * fine.re;
        let quad_error_est = self.prefactor * (fine.re - coarse.re).abs();

        let tail_bound = if self.sigma == 0.5 {
            // the envelope drops the constants 2^{−r2/2} and |2 r2 s|·(t+1)/t ≥ 2 r2 · T/(T+1)
            let r = self.r2 as f64;
            let constants = (-0.5 * r * std::f64::consts::LN_2).exp() * (1.0 + 1.0 / self.t_max) / (2.0 * r);
            self.prefactor
                * constants
                * (0.25 * self.log_disc).exp()
                * self.zeta_tail_max
                * integrand_envelope_tail(self.r2 as u32, radius, self.t_max, &self.gamma_cfg)
        } else {
            let r = self.r2 as f64;
            self.prefactor
                * (0.5 * self.sigma * self.log_disc).exp()
                * self.zeta_tail_max
                * (self.sigma * log_x).exp()
                * self.gamma_tail_const
                * (self.t_max + 1.0).powf((1.0 - r) / 2.0)
                * 2.0
                / (r - 1.0)
        };
        ErrorTermResult {
            epsilon,
            sigma: self.sigma,
            t_max: self.t_max,
            quad_error_est,
            tail_bound,
            n_nodes: self.fine.nodes.len(),
            imag_part: self.prefactor * fine.im.abs(),
            tail_is_heuristic: true,
        }
    }
}

/// ε(V, K) by contour quadrature on Re s = σ up to height T.
pub fn error_term(field: &CyclotomicField, volume: f64, sigma: f64, t_max: f64) -> Result<ErrorTermResult> {
    check_hypotheses(field, sigma)?;
    if !(volume > 0.0) {
        return Err(Error::InvalidArgument(format!("volume {volume} must be positive")));
    }
    Ok(ErrorTermEngine::new(field, sigma, t_max, (volume, volume))?.evaluate(volume))
}

/// 1 + V + ε(V, K) with the default σ and T.
pub fn mean_count_prediction(field: &CyclotomicField, volume: f64) -> Result<f64> {
    Ok(1.0 + volume + error_term(field, volume, DEFAULT_SIGMA, DEFAULT_T)?.epsilon)
}
