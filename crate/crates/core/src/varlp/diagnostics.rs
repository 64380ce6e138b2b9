use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{log_radial, log_uniform, rng, uniform_ball, unit_vector};
use crate::varlp::ExponentField;

/// Empirical local log-Hölder constant of `1/p`:
/// `sup |1/p(x) - 1/p(y)| log(e + 1/|x - y|)` over sampled pairs with `|x - y| ≤ 1/2`.
///
/// `x` is uniform in `B(0, 4)` and `|x - y|` is log-uniform in `[1e-9, 1/2]`.
pub fn lh0_constant(p: &ExponentField, dim: usize, samples: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let mut sup = 0.0f64;
    for _ in 0..samples {
        let x = uniform_ball(&mut r, dim, 4.0);
        let h = log_uniform(&mut r, 1e-9, 0.5);
        let dir = unit_vector(&mut r, dim);
        let y: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + h * b).collect();
        let v = (1.0 / p.eval_f64(&x) - 1.0 / p.eval_f64(&y)).abs() * (std::f64::consts::E + 1.0 / h).ln();
        sup = sup.max(v);
    }
    sup
}

/// Outcome of [`pinfty_gamma_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinftyReport {
    pub samples: usize,
    /// `sup |p(x) - p_∞| |x|^2`.
    pub c_gamma_hat: f64,
    /// `e^{C_γ / p_∞}`.
    pub c1: f64,
    /// `e^{C_γ p'_- / p_∞}`.
    pub c2: f64,
    /// Largest `|log e^{-|x|^2 (p(x)/p_∞ - 1)}| / log C_1` seen (at most 1 when the bound holds).
    pub worst_first: f64,
    /// Same for the conjugate exponent against `C_2`.
    pub worst_second: f64,
    pub lemma14_ok: bool,
}

/// Samples `|x|` log-uniformly in `[1e-3, max_radius]` and measures `C_γ`, then checks
/// both two-sided bounds `C^{-1} ≤ e^{-|x|^2 (q(x)/q_∞ - 1)} ≤ C` for `q = p` with
/// `C_1 = e^{C_γ/p_∞}` and for `q = p'` with `C_2 = e^{C_γ p'_-/p_∞}`.
pub fn pinfty_gamma_check(
    p: &ExponentField,
    dim: usize,
    samples: usize,
    max_radius: f64,
    seed: u64,
) -> Result<PinftyReport> {
    let p_inf = p
        .p_infty()
        .ok_or_else(|| Error::InvalidArgument("P-infinity check needs p_infty".into()))?;
    let conj = p.conjugate()?;
    let pc_inf = conj.p_infty().expect("conjugate keeps p_infty");
    let mut r = rng(seed);
    let points: Vec<Vec<f64>> = (0..samples).map(|_| log_radial(&mut r, dim, 1e-3, max_radius)).collect();
    let c_hat = points
        .iter()
        .map(|x| {
            let x2: f64 = x.iter().map(|v| v * v).sum();
            (p.eval_f64(x) - p_inf).abs() * x2
        })
        .fold(0.0, f64::max);
    let log_c1 = c_hat / p_inf;
    let log_c2 = c_hat * conj.p_minus() / p_inf;
    let slack = 1e-12;
    let mut worst_first = 0.0f64;
    let mut worst_second = 0.0f64;
    let mut ok = true;
    for x in &points {
        let x2: f64 = x.iter().map(|v| v * v).sum();
        let l1 = (-x2 * (p.eval_f64(x) / p_inf - 1.0)).abs();
        let l2 = (-x2 * (conj.eval_f64(x) / pc_inf - 1.0)).abs();
        ok &= l1 <= log_c1 * (1.0 + slack) + slack && l2 <= log_c2 * (1.0 + slack) + slack;
        worst_first = worst_first.max(if log_c1 > 0.0 { l1 / log_c1 } else { l1 });
        worst_second = worst_second.max(if log_c2 > 0.0 { l2 / log_c2 } else { l2 });
    }
    Ok(PinftyReport {
        samples,
        c_gamma_hat: c_hat,
        c1: log_c1.exp(),
        c2: log_c2.exp(),
        worst_first,
        worst_second,
        lemma14_ok: ok,
    })
}

/// Sampled check of the declared bounds `p_- ≤ p(x) ≤ p_+`.
pub fn bounds_hold(p: &ExponentField, dim: usize, samples: usize, seed: u64) -> bool {
    let mut r = rng(seed);
    (0..samples).all(|_| {
        let x = log_radial(&mut r, dim, 1e-4, 1e3);
        let v = p.eval_f64(&x);
        v >= p.p_minus() - 1e-12 && v <= p.p_plus() + 1e-12
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lh0_examples() {
        let c = ExponentField::constant(2.0).unwrap();
        assert_eq!(lh0_constant(&c, 2, 1000, 1), 0.0);
        let p = ExponentField::decay(2.0, 1.0).unwrap();
        let a = lh0_constant(&p, 1, 20_000, 3);
        let b = lh0_constant(&p, 1, 40_000, 3);
        assert!(a.is_finite() && a > 0.0);
        assert!((b - a).abs() <= 0.1 * a);
        let s = ExponentField::step(1.5, 3.0, 1.0).unwrap();
        let small = lh0_constant(&s, 1, 1_000, 5);
        let large = lh0_constant(&s, 1, 1_000_000, 5);
        assert!(large > small);
    }

    #[test]
    fn pinfty_examples() {
        let c = ExponentField::constant(2.0).unwrap();
        let r = pinfty_gamma_check(&c, 2, 500, 1e3, 1).unwrap();
        assert_eq!(r.c_gamma_hat, 0.0);
        assert!(r.lemma14_ok);
        let p = ExponentField::decay(2.0, 1.0).unwrap();
        let r = pinfty_gamma_check(&p, 2, 10_000, 1e3, 1).unwrap();
        assert!(r.c_gamma_hat <= 1.0 && r.lemma14_ok);
        let l = ExponentField::log_decay(2.0, 1.0).unwrap();
        let r = pinfty_gamma_check(&l, 1, 10_000, 1e3, 1).unwrap();
        assert!(r.c_gamma_hat > 1e4);
    }

    #[test]
    fn declared_bounds() {
        for id in ["decay:2,1", "logdecay:3,0.5", "osc:2,0.5,3", "bump:2,1,1", "step:1.5,3,1"] {
            let p: ExponentField = id.parse().unwrap();
            assert!(bounds_hold(&p, 2, 2000, 9), "{id}");
        }
    }
}
