//! The comparison kernel `Q(x, y) = |x+y|^{d+1} e^{-α_∞|x+y|}` and the
//! exponent equivalence `e^{|y|²/p(y) - |x|²/p(x)} ≍ e^{(|y|² - |x|²)/p_∞}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::bounds::sample::sample_point;
use crate::bounds::{BoundReport, RatioAccumulator};
use crate::error::{Error, Result};
use crate::quadrature::{centered_rule, CenteredOptions, QuadratureRule};
use crate::sampling::substream;
use crate::scalar::{norm, norm_sq};
use crate::varlp::ExponentField;

/// `(1 - eps)/2 - |1/p_∞ - (1 - eps)/2|`.
pub fn alpha_infty(p_infty: f64, eps: f64) -> f64 {
    let h = (1.0 - eps) / 2.0;
    h - (1.0 / p_infty - h).abs()
}

/// `∫_{ℝ^d} (|z|^{d+1} + |z|^{(d+1) q}) e^{-α|z|} dz` with `q = p'_+`.
pub fn q_moment_bound(dim: usize, alpha: f64, q: f64) -> f64 {
    let d = dim as f64;
    let sphere = 2.0 * std::f64::consts::PI.powf(d / 2.0) / gamma(d / 2.0);
    let radial = |k: f64| gamma(d + k) / alpha.powf(d + k);
    sphere * (radial(d + 1.0) + radial((d + 1.0) * q))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PqReport {
    pub eps: f64,
    pub alpha_infty: f64,
    /// [`q_moment_bound`] for the exponent.
    pub moment_bound: f64,
    /// `∫ Q(x, y)^{p'(y)} dy` against `moment_bound` at sampled `x`.
    pub moments: BoundReport,
    /// Both directions of the equivalence against `C_1²`, `C_1 = e^{C_γ/p_∞}`.
    pub equivalence: BoundReport,
}

impl PqReport {
    pub fn holds(&self) -> bool {
        self.alpha_infty > 0.0 && self.moments.clean() && self.equivalence.clean()
    }
}

fn polar_rule(dim: usize, alpha: f64) -> Result<QuadratureRule<f64>> {
    let opts = CenteredOptions {
        radial_order: 16,
        dyadic_levels: 4,
        inner_radius: 0.5,
        panel_width: 1.0,
        min_angular: if dim == 3 { 24 } else { 64 },
        angular_per_radius: 0.0,
        breakpoints: vec![1.0],
    };
    centered_rule(&vec![0.0; dim], 100.0 / alpha, &opts)
}

/// Checks `α_∞ > 0`, the uniform moment bound for `Q(x, ·)^{p'(·)}` at `samples` points `x`,
/// and the exponent equivalence at `samples` pairs.
pub fn pq_kernel_check(p: &ExponentField, dim: usize, eps: f64, samples: usize, seed: u64) -> Result<PqReport> {
    let p_inf = p
        .p_infty()
        .ok_or_else(|| Error::InvalidArgument("the P/Q check needs p_infty".into()))?;
    let c_gamma = p
        .c_gamma()
        .ok_or_else(|| Error::InvalidArgument("the P/Q check needs a declared C_gamma".into()))?;
    if !(p.p_minus() > 1.0) {
        return Err(Error::InvalidArgument("the P/Q check needs p_minus > 1".into()));
    }
    let alpha = alpha_infty(p_inf, eps);
    if !(eps > 0.0) || !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha_infty = {alpha} is not positive; eps must lie in (0, 1/p'_infty)"
        )));
    }
    let conj = p.conjugate()?;
    let bound = q_moment_bound(dim, alpha, conj.p_plus());
    let rule = polar_rule(dim, alpha)?;

    let mut rng = substream(seed, "pq-kernel");
    let xs: Vec<Vec<f64>> = (0..samples).map(|_| sample_point(&mut rng, dim)).collect();
    let moments: Vec<f64> = xs
        .par_iter()
        .map(|x| {
            let mut y = vec![0.0; dim];
            rule.iter()
                .map(|(z, w)| {
                    for k in 0..dim {
                        y[k] = z[k] - x[k];
                    }
                    let q = conj.eval_f64(&y);
                    let r = norm(z);
                    w * ((dim as f64 + 1.0) * q * r.ln() - alpha * r * q).exp()
                })
                .sum()
        })
        .collect();
    let mut acc = RatioAccumulator::new("q-moment", dim, 0.0).region("global");
    for m in moments {
        acc.push(m, bound);
    }

    let c1 = (c_gamma / p_inf).exp();
    let mut eq = RatioAccumulator::new("exponent-equivalence", dim, 1e-12);
    for _ in 0..samples {
        let x = sample_point(&mut rng, dim);
        let y = sample_point(&mut rng, dim);
        let (xx, yy) = (norm_sq(&x), norm_sq(&y));
        let log_ratio = yy / p.eval_f64(&y) - xx / p.eval_f64(&x) - (yy - xx) / p_inf;
        eq.push(log_ratio.exp(), c1 * c1);
        eq.push((-log_ratio).exp(), c1 * c1);
    }
    Ok(PqReport {
        eps,
        alpha_infty: alpha,
        moment_bound: bound,
        moments: acc.finish(),
        equivalence: eq.finish(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn alpha_example() {
        assert_relative_eq!(alpha_infty(2.0, 0.1), 0.4, epsilon = 1e-15);
        assert!(alpha_infty(1.5, 0.5) <= 0.0);
    }

    #[test]
    fn constant_exponent_equivalence_is_exact() {
        let p = ExponentField::constant(2.0).unwrap();
        let r = pq_kernel_check(&p, 1, 0.1, 30, 1).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_relative_eq!(r.equivalence.empirical_constant, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn moment_matches_closed_form_for_constant_exponent() {
        // p ≡ 2: ∫ |z|^{2(d+1)} e^{-2α|z|} dz is radial and explicit.
        let p = ExponentField::constant(2.0).unwrap();
        for d in 1..=3 {
            let alpha = alpha_infty(2.0, 0.1);
            let r = pq_kernel_check(&p, d, 0.1, 3, 2).unwrap();
            let df = d as f64;
            let sphere = 2.0 * std::f64::consts::PI.powf(df / 2.0) / gamma(df / 2.0);
            let exact = sphere * gamma(df + 2.0 * (df + 1.0)) / (2.0 * alpha).powf(df + 2.0 * (df + 1.0));
            let measured = r.moments.empirical_constant * r.moment_bound;
            assert_relative_eq!(measured, exact, max_relative = 1e-6);
        }
    }

    #[test]
    fn decaying_exponent() {
        let p = ExponentField::decay(2.0, 1.0).unwrap();
        for d in 1..=2 {
            let r = pq_kernel_check(&p, d, 0.1, 40, 3).unwrap();
            assert!(r.holds(), "{r:?}");
        }
        assert!(pq_kernel_check(&p, 1, 0.6, 5, 3).is_err());
    }
}
