//! Local-part kernels `𝒦_2`, `G_2`, `𝒦_3` and the inequalities that feed them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::lemmas::g2_holder_constant;
use crate::bounds::sample::local_pair;
use crate::bounds::{BoundReport, RatioAccumulator};
use crate::error::{check_dim, Error, Result};
use crate::quadrature::{integrate_unit, AdaptiveOptions};
use crate::riesz::{kernel_depth, log_weight, riesz_kernel_integral, RieszOrder};
use crate::sampling::{substream, uniform};
use crate::scalar::{dist, dist_sq, norm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxKernels {
    /// `∫_0^1 L^{β/2-1} e^{-|x-y|²/2u} u^{-d/2} du`.
    pub k2: f64,
    /// `∫_0^1 L^{β/2} e^{-|x-y|²/2u} u^{-d/2} du`.
    pub g2: f64,
    /// `(|x| + 1) / |x - y|^{d-1}`.
    pub k3: f64,
}

pub fn aux_kernels(x: &[f64], y: &[f64], beta: f64) -> Result<AuxKernels> {
    check_dim(x.len(), y.len())?;
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument("beta must be positive".into()));
    }
    let r2 = dist_sq(x, y);
    if r2 == 0.0 {
        return Err(Error::Degenerate("auxiliary kernels at x = y".into()));
    }
    let d = x.len() as f64;
    let depth = kernel_depth(x, y);
    let opts = AdaptiveOptions {
        abs_tol: f64::MIN_POSITIVE,
        rel_tol: 1e-10,
        max_panels: 4000,
    };
    let weight = |u: f64| (-r2 / (2.0 * u) - 0.5 * d * u.ln()).exp();
    let k2 = integrate_unit(|u, v| log_weight(u, v).powf(beta / 2.0 - 1.0) * weight(u), depth, &opts)?.value;
    let g2 = integrate_unit(|u, v| log_weight(u, v).powf(beta / 2.0) * weight(u), depth, &opts)?.value;
    let k3 = (norm(x) + 1.0) / r2.sqrt().powi(x.len() as i32 - 1);
    Ok(AuxKernels { k2, g2, k3 })
}

/// `|N_{β/2}(x, y)| ≤ C (𝒦_3(x, y) + 𝒦_2(x - y))` on seeded local pairs.
pub fn local_bound_check(dim: usize, beta: f64, samples: usize, seed: u64) -> Result<BoundReport> {
    let order = RieszOrder::new(beta)?;
    let mut rng = substream(seed, "local-bound");
    let pairs: Vec<_> = (0..samples).map(|_| local_pair(&mut rng, dim)).collect();
    let rows = pairs
        .par_iter()
        .map(|(x, y)| {
            let aux = aux_kernels(x, y, beta)?;
            let rhs = aux.k2 + aux.k3;
            let opts = AdaptiveOptions {
                abs_tol: 1e-10 * rhs,
                rel_tol: 1e-9,
                max_panels: 4000,
            };
            let n = riesz_kernel_integral(order, x, y, &opts)?;
            Ok((n.value.abs(), rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = RatioAccumulator::new("local-bound", dim, 0.0).beta(beta).region("local");
    acc.extend(rows);
    Ok(acc.finish())
}

/// `G_2(x - y) ≤ C' / |x - y|^{d-1}` with the explicit `C'` of [`g2_holder_constant`].
pub fn g2_check(dim: usize, beta: f64, samples: usize, seed: u64) -> Result<BoundReport> {
    let c = g2_holder_constant(dim, beta)?;
    let mut rng = substream(seed, "g2-bound");
    let pairs: Vec<_> = (0..samples).map(|_| local_pair(&mut rng, dim)).collect();
    let rows = pairs
        .par_iter()
        .map(|(x, y)| {
            let aux = aux_kernels(x, y, beta)?;
            Ok((aux.g2, c / dist(x, y).powi(dim as i32 - 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = RatioAccumulator::new("g2-bound", dim, 0.0).beta(beta).region("local");
    acc.extend(rows);
    Ok(acc.finish())
}

/// `|y - √(1-u) x|² ≥ |x - y|² - 2du` at local pairs and uniform `u ∈ (0, 1)`.
pub fn local_inequality_check(dim: usize, pairs: usize, u_per_pair: usize, seed: u64) -> BoundReport {
    let mut rng = substream(seed, "local-inequality");
    let mut acc = RatioAccumulator::new("local-inequality", dim, 1e-12);
    for _ in 0..pairs {
        let (x, y) = local_pair(&mut rng, dim);
        let r2 = dist_sq(&x, &y);
        for _ in 0..u_per_pair {
            let u: f64 = uniform(&mut rng, 0.0, 1.0).max(f64::MIN_POSITIVE);
            let sv = (1.0 - u).sqrt();
            let q: f64 = x.iter().zip(&y).map(|(a, b)| (b - sv * a).powi(2)).sum();
            acc.push(r2 - 2.0 * dim as f64 * u, q);
        }
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn k3_in_one_dimension() {
        let a = aux_kernels(&[0.7], &[1.1], 1.0).unwrap();
        assert_relative_eq!(a.k3, 1.7, epsilon = 1e-15);
        assert!(a.k2 > 0.0 && a.g2 > 0.0);
        assert!(aux_kernels(&[0.7], &[0.7], 1.0).is_err());
    }

    #[test]
    fn k2_at_beta_two_is_a_plain_integral() {
        // β = 2: L^0 = 1, so 𝒦_2 = ∫ e^{-r²/2u} u^{-1/2} du in d = 1.
        let a = aux_kernels(&[0.0], &[0.5], 2.0).unwrap();
        let direct = crate::quadrature::integrate(
            |u: f64| if u <= 0.0 { 0.0 } else { (-0.125 / u).exp() / u.sqrt() },
            &[0.0, 0.01, 0.1, 1.0],
            &AdaptiveOptions::relative(1e-12),
        )
        .unwrap()
        .value;
        assert_relative_eq!(a.k2, direct, max_relative = 1e-9);
    }

    #[test]
    fn local_bounds_hold() {
        for d in 1..=2 {
            let r = local_bound_check(d, 1.0, 200, 3).unwrap();
            assert!(r.is_stable(1.5), "{r:?}");
            let g = g2_check(d, 1.0, 100, 3).unwrap();
            assert!(g.clean(), "{g:?}");
            let l = local_inequality_check(d, 200, 20, 3);
            assert!(l.clean(), "{l:?}");
        }
    }
}
