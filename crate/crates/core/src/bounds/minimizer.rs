//! The quantities `a`, `b`, `u(t)` and `t_0` of the global part.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::sample::{global_pair_b_pos, sample_point};
use crate::bounds::{BoundReport, RatioAccumulator};
use crate::error::{check_dim, Error, Result};
use crate::quadrature::{integrate, AdaptiveOptions};
use crate::sampling::{log_uniform, substream};
use crate::scalar::{dist, dot, norm, norm_sq, Scalar};

/// `a = |x|² + |y|²`, `b = 2⟨x, y⟩`, the minimiser `t_0` of `u` and `u(t_0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelGeometry<S> {
    pub a: S,
    pub b: S,
    pub t0: S,
    pub u_t0: S,
}

/// `√(a² - b²)` evaluated as `|x - y| |x + y|`.
fn root_disc<S: Scalar>(x: &[S], y: &[S]) -> S {
    let plus = x.iter().zip(y).fold(S::zero(), |acc, (&p, &q)| acc + (p + q) * (p + q));
    dist(x, y) * plus.sqrt()
}

pub fn kernel_geometry<S: Scalar>(x: &[S], y: &[S]) -> Result<KernelGeometry<S>> {
    check_dim(x.len(), y.len())?;
    let xx = norm_sq(x);
    let yy = norm_sq(y);
    let a = xx + yy;
    if a == S::zero() {
        return Err(Error::Degenerate("kernel geometry at x = y = 0".into()));
    }
    let b = S::of(2.0) * dot(x, y);
    let s = root_disc(x, y);
    let two = S::of(2.0);
    Ok(KernelGeometry {
        a,
        b,
        t0: if b == S::zero() { S::one() } else { two * s / (a + s) },
        u_t0: if b == S::zero() { yy } else { (yy - xx) / two + s / two },
    })
}

/// `u(t) = |y - √(1-t) x|² / t = a/t - (√(1-t)/t) b - |x|²` for `t ∈ (0, 1]`.
pub fn u_of_t<S: Scalar>(t: S, x: &[S], y: &[S]) -> Result<S> {
    check_dim(x.len(), y.len())?;
    if !(t > S::zero() && t <= S::one()) {
        return Err(Error::InvalidArgument(format!("u(t) needs t in (0, 1], got {t}")));
    }
    Ok(u_unchecked(t, x, y))
}

/// `|y - √(1-t) x|² / t` with `1 - √(1-t)` written as `t / (1 + √(1-t))`.
#[inline]
pub(crate) fn u_unchecked<S: Scalar>(t: S, x: &[S], y: &[S]) -> S {
    let shift = t / (S::one() + (S::one() - t).sqrt());
    let q = x.iter().zip(y).fold(S::zero(), |acc, (&xi, &yi)| {
        let d = (yi - xi) + xi * shift;
        acc + d * d
    });
    q / t
}

/// Grid search for the minimum of `u` on `[t_min, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizerOutcome {
    pub t0: f64,
    pub u_t0: f64,
    pub grid_min: f64,
    pub grid_argmin: f64,
    /// `|log t_argmin - log t_0|` in units of the grid cell.
    pub cells_off: f64,
}

impl MinimizerOutcome {
    pub fn holds(&self, tol: f64) -> bool {
        self.grid_min >= self.u_t0 - tol && self.cells_off <= 1.0 + 1e-9
    }
}

/// Smallest `t` of the log-spaced grid used by [`t0_minimizer_check`].
pub const GRID_T_MIN: f64 = 1e-8;

pub fn log_grid(grid_size: usize) -> Vec<f64> {
    let n = grid_size.max(2);
    let lo = GRID_T_MIN.ln();
    (0..n)
        .map(|k| {
            if k + 1 == n {
                1.0
            } else {
                (lo * (1.0 - k as f64 / (n - 1) as f64)).exp()
            }
        })
        .collect()
}

/// Locates the minimum of `u` on a log grid of `grid_size` points in `[1e-8, 1]`.
pub fn t0_minimizer_check(x: &[f64], y: &[f64], grid_size: usize) -> Result<MinimizerOutcome> {
    let g = kernel_geometry(x, y)?;
    let grid = log_grid(grid_size);
    let cell = -GRID_T_MIN.ln() / (grid.len() - 1) as f64;
    let (mut best, mut arg) = (f64::INFINITY, 1.0);
    for &t in &grid {
        let u = u_unchecked(t, x, y);
        if u < best {
            best = u;
            arg = t;
        }
    }
    Ok(MinimizerOutcome {
        t0: g.t0,
        u_t0: g.u_t0,
        grid_min: best,
        grid_argmin: arg,
        cells_off: (arg.ln() - g.t0.ln()).abs() / cell,
    })
}

/// [`t0_minimizer_check`] over seeded pairs with `b > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizerReport {
    /// `u(t_0) ≤ grid min` with tolerance `1e-9`.
    pub bound: BoundReport,
    pub argmin_misses: usize,
    pub max_cells_off: f64,
}

impl MinimizerReport {
    pub fn clean(&self) -> bool {
        self.bound.clean() && self.argmin_misses == 0
    }
}

pub fn t0_minimizer_batch(dim: usize, pairs: usize, grid_size: usize, seed: u64) -> Result<MinimizerReport> {
    let mut rng = substream(seed, "t0-minimizer");
    let samples: Vec<(Vec<f64>, Vec<f64>)> = (0..pairs).map(|_| b_pos_pair(&mut rng, dim)).collect();
    let outcomes = samples
        .par_iter()
        .map(|(x, y)| t0_minimizer_check(x, y, grid_size))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = RatioAccumulator::new("t0-minimizer", dim, 1e-9);
    let mut misses = 0;
    let mut worst = 0.0f64;
    for o in &outcomes {
        acc.push(o.u_t0, o.grid_min);
        if o.cells_off > 1.0 + 1e-9 {
            misses += 1;
        }
        worst = worst.max(o.cells_off);
    }
    Ok(MinimizerReport {
        bound: acc.finish(),
        argmin_misses: misses,
        max_cells_off: worst,
    })
}

/// A pair with `b > 0` and `|x - y| ≥ 1e-3`; half the draws put `y` near `x`.
fn b_pos_pair<R: Rng>(rng: &mut R, dim: usize) -> (Vec<f64>, Vec<f64>) {
    loop {
        let x = sample_point(rng, dim);
        let y = if rng.random::<bool>() {
            sample_point(rng, dim)
        } else {
            let h = crate::sampling::log_radial(rng, dim, 1e-3, 1.0);
            x.iter().zip(&h).map(|(a, b)| a + b).collect()
        };
        if dot(&x, &y) > 0.0 && dist(&x, &y) >= 1e-3 {
            return (x, y);
        }
    }
}

/// `e^{-u(t)} / t^{d/2} ≤ 2^d e^{-u(t_0)} / t_0^{d/2}` at each `t` in `ts`.
///
/// Each sample is recorded as `(lhs/rhs, 1)`, computed in the log domain.
pub fn phib0_check(x: &[f64], y: &[f64], ts: &[f64]) -> Result<BoundReport> {
    let mut acc = RatioAccumulator::new("phib0", x.len(), 1e-12);
    for r in phib0_ratios(x, y, ts)? {
        acc.push(r, 1.0);
    }
    Ok(acc.finish())
}

fn phib0_ratios(x: &[f64], y: &[f64], ts: &[f64]) -> Result<Vec<f64>> {
    let g = kernel_geometry(x, y)?;
    if !(g.b > 0.0) {
        return Err(Error::InvalidArgument("phib0 check needs b > 0".into()));
    }
    let half_d = x.len() as f64 / 2.0;
    let rhs = x.len() as f64 * std::f64::consts::LN_2 - g.u_t0 - half_d * g.t0.ln();
    ts.iter()
        .map(|&t| {
            let u = u_of_t(t, x, y)?;
            Ok((-u - half_d * t.ln() - rhs).exp())
        })
        .collect()
}

/// [`phib0_check`] on seeded pairs from `{b > 0}` intersected with the global region
/// `|x - y| ≥ d·min(1, 1/|x|)`, with `t_per_pair` log-uniform `t ∈ [1e-6, 1]` plus `t_0` itself.
pub fn phib0_batch(dim: usize, pairs: usize, t_per_pair: usize, seed: u64) -> Result<BoundReport> {
    let mut rng = substream(seed, "phib0");
    let samples: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = (0..pairs)
        .map(|_| {
            let (x, y) = global_pair_b_pos(&mut rng, dim);
            let mut ts: Vec<f64> = (0..t_per_pair.saturating_sub(1)).map(|_| log_uniform(&mut rng, 1e-6, 1.0)).collect();
            ts.push(kernel_geometry(&x, &y).map(|g| g.t0).unwrap_or(1.0));
            (x, y, ts)
        })
        .collect();
    let ratios = samples
        .par_iter()
        .map(|(x, y, ts)| phib0_ratios(x, y, ts))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = RatioAccumulator::new("phib0", dim, 1e-12).region("b_pos_global");
    for r in ratios.into_iter().flatten() {
        acc.push(r, 1.0);
    }
    Ok(acc.finish())
}

/// Behaviour of `t_0` over sampled pairs with `b > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct T0Asymptotics {
    pub samples: usize,
    /// Range of `t_0 |x + y| / |x - y|`.
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub t0_max: f64,
    /// `t_0^{-d/2} ≤ C |x + y|^d` over the pairs that lie in the global region.
    pub inverse_power: BoundReport,
}

pub fn t0_asymptotics_check(dim: usize, pairs: usize, seed: u64) -> Result<T0Asymptotics> {
    let mut rng = substream(seed, "t0-asymptotics");
    let samples: Vec<(Vec<f64>, Vec<f64>)> = (0..pairs).map(|_| b_pos_pair(&mut rng, dim)).collect();
    let mut acc = RatioAccumulator::new("t0-inverse-power", dim, 0.0).region("b_pos_global");
    let (mut lo, mut hi, mut t0_max) = (f64::INFINITY, 0.0f64, 0.0f64);
    let half_d = dim as f64 / 2.0;
    for (x, y) in &samples {
        let g = kernel_geometry(x, y)?;
        let plus: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        let sum = norm(&plus);
        let ratio = g.t0 * sum / dist(x, y);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        t0_max = t0_max.max(g.t0);
        if !crate::geometry::in_local_region(x, y) {
            acc.push(g.t0.powf(-half_d), sum.powi(dim as i32));
        }
    }
    Ok(T0Asymptotics {
        samples: pairs,
        ratio_min: lo,
        ratio_max: hi,
        t0_max,
        inverse_power: acc.finish(),
    })
}

/// `∫_0^1 e^{-c a/t} t^{-(d/2+1)} dt · e^{c a}` with `c = 1 - eps`, by adaptive quadrature.
pub fn estimate213_integral(dim: usize, eps: f64, a: f64) -> Result<f64> {
    let c = 1.0 - eps;
    let p = dim as f64 / 2.0 + 1.0;
    let mut bp = vec![0.0];
    for k in (1..=30).rev() {
        bp.push(0.5f64.powi(k));
    }
    bp.push(1.0);
    let r = integrate(
        |t: f64| {
            if t <= 0.0 {
                0.0
            } else {
                (-c * a * (1.0 / t - 1.0) - p * t.ln()).exp()
            }
        },
        &bp,
        &AdaptiveOptions::relative(1e-11),
    )?;
    Ok(r.value)
}

/// Closed form of [`estimate213_integral`]: `e^{ca} (ca)^{-d/2} Γ(d/2, ca)`.
pub fn estimate213_closed_form(dim: usize, eps: f64, a: f64) -> f64 {
    let s = dim as f64 / 2.0;
    let ca = (1.0 - eps) * a;
    let upper = statrs::function::gamma::gamma_ur(s, ca) * statrs::function::gamma::gamma(s);
    ca.exp() * ca.powf(-s) * upper
}

/// `∫_0^1 e^{-(1-eps)a/t} t^{-(d/2+1)} dt ≤ C e^{-(1-eps)a}` for `a ∈ [d/2, a_max]`.
///
/// The ratio decreases in `a`, so `a - d/2` is drawn log-uniformly in `[1e-6, a_max - d/2]`.
pub fn estimate213_check(dim: usize, eps: f64, samples: usize, a_max: f64, seed: u64) -> Result<BoundReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument("eps must lie in (0, 1)".into()));
    }
    let lo = dim as f64 / 2.0;
    let mut rng = substream(seed, "estimate213");
    let span = (a_max - lo).max(2e-6);
    let a: Vec<f64> = (0..samples).map(|_| lo + log_uniform(&mut rng, 1e-6, span)).collect();
    let values = a
        .par_iter()
        .map(|&a| estimate213_integral(dim, eps, a))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = RatioAccumulator::new("estimate213", dim, 0.0);
    for v in values {
        acc.push(v, 1.0);
    }
    Ok(acc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{rng, standard_normal, uniform};
    use approx::assert_relative_eq;

    #[test]
    fn worked_example() {
        let g = kernel_geometry(&[1.0], &[2.0]).unwrap();
        assert_eq!((g.a, g.b), (5.0, 4.0));
        assert_relative_eq!(g.t0, 0.75, epsilon = 1e-15);
        assert_relative_eq!(g.u_t0, 3.0, epsilon = 1e-14);
        assert_relative_eq!(u_of_t(0.75, &[1.0], &[2.0]).unwrap(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn orthogonal_pair() {
        let g = kernel_geometry(&[1.0, 0.0], &[0.0, 2.0]).unwrap();
        assert_eq!(g.t0, 1.0);
        assert_relative_eq!(g.u_t0, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn origin_pair_is_degenerate() {
        assert!(matches!(kernel_geometry(&[0.0, 0.0], &[0.0, 0.0]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn swap_sum() {
        let mut r = rng(3);
        for _ in 0..100 {
            let x = standard_normal(&mut r, 3);
            let y = standard_normal(&mut r, 3);
            let g = kernel_geometry(&x, &y).unwrap();
            let h = kernel_geometry(&y, &x).unwrap();
            assert_relative_eq!(g.u_t0 + h.u_t0, (g.a * g.a - g.b * g.b).sqrt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn u_identity() {
        let mut r = rng(11);
        for _ in 0..100 {
            let x = standard_normal(&mut r, 2);
            let y = standard_normal(&mut r, 2);
            let t: f64 = uniform(&mut r, 1e-3, 1.0);
            let a = norm_sq(&x) + norm_sq(&y);
            let b = 2.0 * dot(&x, &y);
            let expanded = a / t - (1.0 - t).sqrt() / t * b - norm_sq(&x);
            assert_relative_eq!(u_of_t(t, &x, &y).unwrap(), expanded, max_relative = 1e-9, epsilon = 1e-9);
        }
        assert_relative_eq!(u_of_t(1.0, &[0.3, 1.0], &[2.0, -1.0]).unwrap(), 5.0, epsilon = 1e-14);
        assert!(u_of_t(0.0, &[1.0], &[1.0]).is_err());
        assert!(u_of_t(1.5, &[1.0], &[1.0]).is_err());
    }

    #[test]
    fn grid_finds_worked_minimum() {
        let o = t0_minimizer_check(&[1.0], &[2.0], 4096).unwrap();
        assert!(o.holds(1e-9));
        assert_relative_eq!(o.grid_min, 3.0, epsilon = 1e-4);
        assert_relative_eq!(o.grid_argmin, 0.75, epsilon = 0.01);
    }

    #[test]
    fn boundary_minimum_when_b_vanishes() {
        let (x, y) = ([1.0, 0.0], [0.0, 1.5]);
        let grid = log_grid(512);
        let us: Vec<f64> = grid.iter().map(|&t| u_of_t(t, &x, &y).unwrap()).collect();
        assert!(us.windows(2).all(|w| w[1] <= w[0]));
        assert_relative_eq!(*us.last().unwrap(), 2.25, epsilon = 1e-14);
    }

    #[test]
    fn random_minimizers() {
        for d in 1..=3 {
            let r = t0_minimizer_batch(d, 200, 4096, 5).unwrap();
            assert!(r.clean(), "{r:?}");
        }
    }

    #[test]
    fn phib0_worked_point() {
        let rep = phib0_check(&[1.0], &[2.0], &[0.3, 0.75]).unwrap();
        assert_eq!(rep.violations, 0);
        assert_relative_eq!(rep.empirical_constant, 0.5, epsilon = 1e-12);
        assert!(phib0_check(&[1.0], &[-2.0], &[0.3]).is_err());
    }

    #[test]
    fn phib0_sampled() {
        for d in 1..=3 {
            let r = phib0_batch(d, 100, 20, 9).unwrap();
            assert!(r.clean(), "{r:?}");
        }
    }

    #[test]
    fn t0_ratio_bounds() {
        for d in 1..=3 {
            let r = t0_asymptotics_check(d, 2000, 1).unwrap();
            assert!(r.ratio_min >= 1.0 - 1e-12 && r.ratio_max <= 4.0 + 1e-12, "{r:?}");
            assert!(r.t0_max < 1.0);
            assert!(r.inverse_power.empirical_constant <= (d as f64).powf(-(d as f64) / 2.0) + 1e-12);
        }
    }

    #[test]
    fn estimate213_matches_closed_form() {
        for d in 1..=3 {
            for a in [d as f64 / 2.0, 2.0, 10.0, 40.0] {
                let q = estimate213_integral(d, 0.2, a).unwrap();
                assert_relative_eq!(q, estimate213_closed_form(d, 0.2, a), max_relative = 1e-9);
            }
        }
        let r = estimate213_check(2, 0.25, 200, 40.0, 4).unwrap();
        assert!(r.is_stable(1.5));
        assert_relative_eq!(r.empirical_constant, estimate213_closed_form(2, 0.25, 1.0), max_relative = 1e-4);
    }
}
