//! Comparison of `∫_E F^{ρ(y)}` with `∫_E F^{ρ_∞}` for `0 ≤ F ≤ 1`, up to the
//! decaying remainder `R(y) = (e + |y|)^{-N}`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, RatioAccumulator};
use crate::error::{Error, Result};
use crate::quadrature::{centered_rule, CenteredOptions};
use crate::sampling::{log_uniform, substream, uniform_ball};
use crate::scalar::{dist_sq, norm};
use crate::varlp::ExponentField;

/// A Gaussian bump `A e^{-|y - m|²/s²}` with `0 < A ≤ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amplitude: f64,
    pub center: Vec<f64>,
    pub scale: f64,
}

impl Bump {
    pub fn eval(&self, y: &[f64]) -> f64 {
        self.amplitude * (-dist_sq(y, &self.center) / (self.scale * self.scale)).exp()
    }
}

/// The three integrals over `E = B(c, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityIntegrals {
    /// `∫_E F^{ρ(y)} dy`.
    pub variable: f64,
    /// `∫_E F^{ρ_∞} dy`.
    pub limit: f64,
    /// `∫_E R^{ρ_-} dy`.
    pub remainder: f64,
}

pub fn density_integrals(
    rho: &ExponentField,
    n_exp: f64,
    f: &Bump,
    center: &[f64],
    radius: f64,
) -> Result<DensityIntegrals> {
    let rho_inf = rho
        .p_infty()
        .ok_or_else(|| Error::InvalidArgument("rho needs a limit at infinity".into()))?;
    let opts = CenteredOptions {
        radial_order: 12,
        dyadic_levels: 0,
        inner_radius: radius.min(0.25),
        panel_width: 0.25,
        min_angular: 24,
        angular_per_radius: 8.0,
        breakpoints: Vec::new(),
    };
    let rule = centered_rule(center, radius, &opts)?;
    let rho_minus = rho.p_minus();
    let mut out = DensityIntegrals {
        variable: 0.0,
        limit: 0.0,
        remainder: 0.0,
    };
    for (y, w) in rule.iter() {
        let v = f.eval(y);
        out.variable += w * v.powf(rho.eval_f64(y));
        out.limit += w * v.powf(rho_inf);
        out.remainder += w * (std::f64::consts::E + norm(y)).powf(-n_exp * rho_minus);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma326Report {
    /// `∫ F^ρ - ∫ R^{ρ_-} ≤ C ∫ F^{ρ_∞}`.
    pub first: BoundReport,
    /// `∫ F^{ρ_∞} - ∫ R^{ρ_-} ≤ C ∫ F^ρ`.
    pub second: BoundReport,
}

impl Lemma326Report {
    pub fn is_stable(&self, factor: f64) -> bool {
        self.first.is_stable(factor) && self.second.is_stable(factor)
    }
}

/// Samples `f_samples` bumps, each against `e_samples` balls `E = B(c, r)` with `c`
/// uniform in `B(0, 8)` and `r` log-uniform in `[0.1, 4]`. Bumps have amplitude
/// log-uniform in `[1e-3, 1]`, scale log-uniform in `[0.2, 3]` and centre within
/// distance `r + 1` of `c`.
pub fn lemma326_check(
    rho: &ExponentField,
    dim: usize,
    n_exp: f64,
    f_samples: usize,
    e_samples: usize,
    seed: u64,
) -> Result<Lemma326Report> {
    if !(n_exp > dim as f64 / rho.p_minus()) {
        return Err(Error::InvalidArgument(format!("N must exceed d / rho_minus = {}", dim as f64 / rho.p_minus())));
    }
    let mut rng = substream(seed, "lemma326");
    let mut cases = Vec::with_capacity(f_samples * e_samples);
    for _ in 0..f_samples {
        let amplitude = log_uniform(&mut rng, 1e-3, 1.0);
        let scale = log_uniform(&mut rng, 0.2, 3.0);
        let anchor = uniform_ball(&mut rng, dim, 8.0);
        for k in 0..e_samples {
            let (center, radius) = if k == 0 {
                (anchor.clone(), log_uniform(&mut rng, 0.1, 4.0))
            } else {
                (uniform_ball(&mut rng, dim, 8.0), log_uniform(&mut rng, 0.1, 4.0))
            };
            let offset = uniform_ball(&mut rng, dim, radius + 1.0);
            let bump = Bump {
                amplitude,
                center: center.iter().zip(&offset).map(|(a, b)| a + b).collect(),
                scale: scale * (1.0 + 0.1 * rng.random::<f64>()),
            };
            cases.push((bump, center, radius));
        }
    }
    let values = cases
        .par_iter()
        .map(|(f, c, r)| density_integrals(rho, n_exp, f, c, *r))
        .collect::<Result<Vec<_>>>()?;
    let mut first = RatioAccumulator::new("lemma326-first", dim, 0.0);
    let mut second = RatioAccumulator::new("lemma326-second", dim, 0.0);
    for v in values {
        first.push((v.variable - v.remainder).max(0.0), v.limit);
        second.push((v.limit - v.remainder).max(0.0), v.variable);
    }
    Ok(Lemma326Report {
        first: first.finish(),
        second: second.finish(),
    })
}

/// `ρ(x) = 2 + 1 / log(e + |x|)`.
pub fn log_decay_rho() -> ExponentField {
    ExponentField::log_decay(2.0, 1.0).expect("valid preset")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_function_leaves_only_remainder() {
        let rho = log_decay_rho();
        let f = Bump {
            amplitude: 1e-300,
            center: vec![0.0],
            scale: 1.0,
        };
        let v = density_integrals(&rho, 1.0, &f, &[0.0], 1.0).unwrap();
        assert_eq!(v.variable, 0.0);
        assert_eq!(v.limit, 0.0);
        assert!(v.remainder > 0.0);
    }

    #[test]
    fn indicator_with_constant_rho_is_the_volume() {
        let rho = ExponentField::constant(2.0).unwrap();
        let f = Bump {
            amplitude: 1.0,
            center: vec![0.0, 0.0],
            scale: 1e6,
        };
        let v = density_integrals(&rho, 2.0, &f, &[1.0, 1.0], 0.5).unwrap();
        assert_relative_eq!(v.variable, std::f64::consts::PI * 0.25, max_relative = 1e-9);
        assert_relative_eq!(v.limit, v.variable, max_relative = 1e-12);
    }

    #[test]
    fn sampled_constants_are_stable() {
        let rho = log_decay_rho();
        for d in 1..=2 {
            let r = lemma326_check(&rho, d, d as f64, 40, 4, 5).unwrap();
            assert!(r.first.empirical_constant <= 1.0 + 1e-12);
            assert!(r.is_stable(1.5), "{r:?}");
        }
        assert!(lemma326_check(&rho, 2, 0.5, 1, 1, 0).is_err());
    }
}
