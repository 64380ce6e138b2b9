//! Pointwise kernel bounds on the global region `|x - y| ≥ d·min(1, 1/|x|)`.

use rayon::prelude::*;

use crate::bounds::minimizer::kernel_geometry;
use crate::bounds::sample::{global_pair, Region};
use crate::bounds::{BoundReport, RatioAccumulator};
use crate::error::{Error, Result};
use crate::quadrature::AdaptiveOptions;
use crate::riesz::{riesz_kernel_integral, RieszOrder};
use crate::sampling::substream;
use crate::scalar::{norm, norm_sq};

/// `min{1/d, 1/p'_∞, (2/d)(β/2 - r)}` with `r = min{β/4, 1/2}`.
///
/// Without `p_infty` the middle term is dropped.
pub fn eps_supremum(dim: usize, beta: f64, p_infty: Option<f64>) -> f64 {
    let d = dim as f64;
    let r = (beta / 4.0).min(0.5);
    let mut s = (1.0 / d).min(2.0 / d * (beta / 2.0 - r));
    if let Some(p) = p_infty {
        s = s.min(1.0 - 1.0 / p);
    }
    s
}

/// Half of [`eps_supremum`].
pub fn default_eps(dim: usize, beta: f64, p_infty: Option<f64>) -> f64 {
    0.5 * eps_supremum(dim, beta, p_infty)
}

/// The right-hand side claimed for `|N_{β/2}(x, y)|` in `region`, up to a constant.
pub fn global_rhs(region: Region, x: &[f64], y: &[f64], eps: f64) -> Result<f64> {
    let d = x.len() as i32;
    Ok(match region {
        Region::BNonpos => (norm(x) + 1.0) * (-(1.0 - eps) * norm_sq(y)).exp(),
        Region::BPosNear | Region::BPosFar => {
            let g = kernel_geometry(x, y)?;
            let sum: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            let power = if region == Region::BPosNear { d } else { d + 1 };
            norm(&sum).powi(power) * (-(1.0 - eps) * g.u_t0).exp()
        }
    })
}

/// Samples pairs in `region` and measures `sup |N_{β/2}(x, y)| / rhs`.
///
/// `eps` defaults to [`default_eps`] with `p_∞ = 2`.
pub fn global_bound_check(
    dim: usize,
    beta: f64,
    region: Region,
    eps: Option<f64>,
    samples: usize,
    seed: u64,
) -> Result<BoundReport> {
    if dim >= 2 && beta < 1.0 {
        return Err(Error::InvalidArgument("global bounds need beta >= 1 when d >= 2".into()));
    }
    let sup = eps_supremum(dim, beta, Some(2.0));
    let eps = eps.unwrap_or(0.5 * sup);
    if !(eps > 0.0 && eps < sup) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, {sup})")));
    }
    let order = RieszOrder::new(beta)?;
    let mut rng = substream(seed, region.name());
    let pairs: Vec<_> = (0..samples).map(|_| global_pair(&mut rng, dim, region)).collect();
    let rows = pairs
        .par_iter()
        .map(|(x, y)| {
            let rhs = global_rhs(region, x, y, eps)?;
            let opts = AdaptiveOptions {
                abs_tol: 1e-10 * rhs,
                rel_tol: 1e-9,
                max_panels: 4000,
            };
            let n = riesz_kernel_integral(order, x, y, &opts)?;
            Ok((n.value.abs(), rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = RatioAccumulator::new("global-bound", dim, 0.0).beta(beta).region(region.name());
    acc.extend(rows);
    Ok(acc.finish())
}
