//! One-dimensional integrals and elementary inequalities used throughout the estimates.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate, integrate_unit, AdaptiveOptions};
use crate::riesz::log_weight;

/// `sup_{x>0} x^α e^{-c x²} = (α / (2ec))^{α/2}`, and `1` for `α = 0`.
pub fn expineq_constant(alpha: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) || !(alpha >= 0.0) {
        return Err(Error::InvalidArgument("need alpha >= 0 and c > 0".into()));
    }
    if alpha == 0.0 {
        return Ok(1.0);
    }
    Ok((alpha / (2.0 * std::f64::consts::E * c)).powf(alpha / 2.0))
}

/// Largest value of `x^α e^{-c x²}` on a uniform grid of `n` points in `(0, x_max]`,
/// where `x_max` is four times the maximiser plus four.
pub fn expineq_grid_max(alpha: f64, c: f64, n: usize) -> f64 {
    let x_max = 4.0 * (alpha / (2.0 * c)).sqrt() + 4.0;
    let h = x_max / n.max(1) as f64;
    (1..=n.max(1))
        .map(|k| {
            let x = h * k as f64;
            (alpha * x.ln() - c * x * x).exp()
        })
        .fold(0.0, f64::max)
}

/// `∫_0^1 (-log √(1-u))^{α-1} du` by adaptive quadrature; equals `2^{1-α} Γ(α)`.
pub fn lemma_gamma(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument("lemma_gamma needs alpha > 0".into()));
    }
    let p = alpha - 1.0;
    let opts = AdaptiveOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-12,
        max_panels: 4000,
    };
    Ok(integrate_unit(|u: f64, v: f64| log_weight(u, v).powf(p), 64, &opts)?.value)
}

pub fn lemma_gamma_closed_form(alpha: f64) -> f64 {
    2f64.powf(1.0 - alpha) * gamma(alpha)
}

/// `(i, ii)` with `i = ∫_{1/2}^1 L^{β/2} (1-u)^{-1/2} du` and `ii = ∫_0^{1/2} L^{β/2} u^{-1} du`,
/// `L = -log √(1-u)`, by adaptive quadrature down to `2^{-61}` plus the tails below it.
pub fn lemma23_integrals(beta: f64) -> Result<(f64, f64)> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument("lemma23 integrals need beta > 0".into()));
    }
    let hb = beta / 2.0;
    let bp = dyadic_half(60);
    let (tail_i, tail_ii) = lemma23_tails(hb, bp[1]);
    let opts = AdaptiveOptions {
        abs_tol: 1e-16,
        rel_tol: 1e-12,
        max_panels: 4000,
    };
    // In the variable v = 1 - u.
    let i = integrate(|v: f64| i_integrand(hb, v), &bp[1..], &opts)?.value;
    let ii = integrate(|u: f64| ii_integrand(hb, u), &bp[1..], &opts)?.value;
    Ok((tail_i + i, tail_ii + ii))
}

/// Contributions of `(0, h)`: exact for `i`, leading order `(h/2)^{β/2}/(β/2)` for `ii`.
fn lemma23_tails(hb: f64, h: f64) -> (f64, f64) {
    let tail_i = 2.0 * gamma_ur(hb + 1.0, -0.5 * h.ln()) * gamma(hb + 1.0);
    (tail_i, (h / 2.0).powf(hb) / hb)
}

/// `i = 2 Γ(β/2 + 1, log 2 / 2)` after `1 - u = e^{-2s}`.
pub fn lemma23_i_closed_form(beta: f64) -> f64 {
    let a = beta / 2.0 + 1.0;
    2.0 * gamma_ur(a, std::f64::consts::LN_2 / 2.0) * gamma(a)
}

fn i_integrand(hb: f64, v: f64) -> f64 {
    (-0.5 * v.ln()).powf(hb) / v.sqrt()
}

fn ii_integrand(hb: f64, u: f64) -> f64 {
    log_weight(u, 1.0 - u).powf(hb) / u
}

fn dyadic_half(depth: usize) -> Vec<f64> {
    let mut bp = vec![0.0];
    for k in (1..=depth).rev() {
        bp.push(0.5f64.powi(k as i32 + 1));
    }
    bp.push(0.5);
    bp
}

/// Composite Gauss–Legendre values of both [`lemma23_integrals`] under panel refinement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma23Refinement {
    pub beta: f64,
    /// Subpanels per dyadic panel at each refinement level.
    pub splits: Vec<usize>,
    pub i: Vec<f64>,
    pub ii: Vec<f64>,
    /// Largest difference between successive refinements, over both integrals.
    pub max_step: f64,
}

impl Lemma23Refinement {
    pub fn converged(&self, tol: f64) -> bool {
        self.max_step.is_finite() && self.max_step < tol
    }
}

/// Fixed rules: 60 dyadic panels toward the singular end, each cut into `s` equal pieces
/// carrying a 10-point Gauss–Legendre rule, for `s` in `splits`. The part below
/// `2^{-61}` is added in closed form for `i` and from the leading asymptotics for `ii`.
pub fn lemma23_refinement(beta: f64, splits: &[usize]) -> Result<Lemma23Refinement> {
    if !(beta > 0.0) || splits.is_empty() || splits.contains(&0) {
        return Err(Error::InvalidArgument("invalid refinement request".into()));
    }
    let hb = beta / 2.0;
    let bp = dyadic_half(60);
    let (tail_i, tail_ii) = lemma23_tails(hb, bp[1]);
    let gl = gauss_legendre(10);
    let composite = |f: &dyn Fn(f64) -> f64, s: usize| -> f64 {
        let mut total = 0.0;
        for w in bp[1..].windows(2) {
            let step = (w[1] - w[0]) / s as f64;
            for j in 0..s {
                let a = w[0] + step * j as f64;
                let r = gl.mapped(a, a + step);
                total += r.nodes.iter().zip(&r.weights).map(|(&x, &wt)| wt * f(x)).sum::<f64>();
            }
        }
        total
    };
    let mut i = Vec::with_capacity(splits.len());
    let mut ii = Vec::with_capacity(splits.len());
    for &s in splits {
        i.push(tail_i + composite(&|v| i_integrand(hb, v), s));
        ii.push(tail_ii + composite(&|u| ii_integrand(hb, u), s));
    }
    let step = |v: &[f64]| v.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let max_step = step(&i).max(step(&ii));
    Ok(Lemma23Refinement {
        beta,
        splits: splits.to_vec(),
        i,
        ii,
        max_step,
    })
}

/// Constant in `G_2(z) ≤ C'/|z|^{d-1}`: `sup r^{d-1}e^{-r²/2}` times the Hölder bound
/// `(∫ L^{3β/2})^{1/3} (∫ u^{-3/4})^{2/3}`.
pub fn g2_holder_constant(dim: usize, beta: f64) -> Result<f64> {
    let sup = expineq_constant(dim as f64 - 1.0, 0.5)?;
    let moment = lemma_gamma_closed_form(1.5 * beta + 1.0);
    Ok(sup * moment.cbrt() * 4f64.powf(2.0 / 3.0))
}
