//! Test functions for the boundedness experiment: random Hermite expansions,
//! Gaussian bumps and indicators of balls.

use gauss_riesz::hermite::{HermiteExpansion, MultiIndex};
use gauss_riesz::quadrature::{centered_rule, integrate, AdaptiveOptions, CenteredOptions, UNIT_DEPTH};
use gauss_riesz::riesz::{riesz_spectral, subordinate, RieszOrder};
use gauss_riesz::sampling::{log_uniform, standard_normal};
use gauss_riesz::scalar::{dist, dist_sq};
use gauss_riesz::{Expansion, Result, Rule};
use rand::Rng;
use serde::{Deserialize, Serialize};
use libm::erf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Hermite,
    Bump,
    Ball,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Hermite => "hermite",
            Family::Bump => "bump",
            Family::Ball => "ball",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    Hermite(Expansion),
    /// `e^{-|x - c|²/s²}`.
    Bump { center: Vec<f64>, scale: f64 },
    /// `χ_{B(c, r)}`.
    Ball { center: Vec<f64>, radius: f64 },
}

/// Drawing parameters for [`TestFunction::draw`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyOptions {
    pub hermite_degree: u32,
    pub max_terms: usize,
    pub bump_scale: (f64, f64),
    pub ball_radius: (f64, f64),
}

impl Default for FamilyOptions {
    fn default() -> Self {
        Self {
            hermite_degree: 6,
            max_terms: 4,
            bump_scale: (0.25, 1.5),
            ball_radius: (0.3, 1.5),
        }
    }
}

impl TestFunction {
    /// The `k`-th function of a seeded sequence cycles through the three families.
    ///
    /// Each Hermite term picks its order uniformly in `0..=degree`, then a multi-index of that order.
    pub fn draw<R: Rng>(rng: &mut R, k: usize, dim: usize, opts: &FamilyOptions) -> Self {
        match k % 3 {
            0 => {
                let degree = opts.hermite_degree.max(1);
                let total = MultiIndex::up_to_order(dim, degree).len();
                let n = rng.random_range(1..=opts.max_terms.clamp(1, total));
                let mut picks: Vec<MultiIndex> = Vec::with_capacity(n);
                while picks.len() < n {
                    let level = MultiIndex::of_order(dim, rng.random_range(0..=degree));
                    let nu = level[rng.random_range(0..level.len())].clone();
                    if !picks.contains(&nu) {
                        picks.push(nu);
                    }
                }
                let coeffs = standard_normal(rng, n);
                let e = HermiteExpansion::from_terms(dim, picks.into_iter().zip(coeffs)).expect("indices match the dimension");
                TestFunction::Hermite(e)
            }
            1 => TestFunction::Bump {
                center: standard_normal(rng, dim),
                scale: log_uniform(rng, opts.bump_scale.0, opts.bump_scale.1),
            },
            _ => TestFunction::Ball {
                center: standard_normal(rng, dim),
                radius: log_uniform(rng, opts.ball_radius.0, opts.ball_radius.1),
            },
        }
    }

    pub fn family(&self) -> Family {
        match self {
            TestFunction::Hermite(_) => Family::Hermite,
            TestFunction::Bump { .. } => Family::Bump,
            TestFunction::Ball { .. } => Family::Ball,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TestFunction::Hermite(e) => e.dim(),
            TestFunction::Bump { center, .. } | TestFunction::Ball { center, .. } => center.len(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Hermite(e) => e.eval(x).expect("dimension checked by caller"),
            TestFunction::Bump { center, scale } => (-dist_sq(x, center) / (scale * scale)).exp(),
            TestFunction::Ball { center, radius } => {
                if dist(x, center) < *radius {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `∫ f dγ_d`.
    pub fn mean(&self) -> f64 {
        self.semigroup(1.0, 0.0, &vec![0.0; self.dim()])
    }

    /// `T_t f(x)` in closed form, with `u = 1 - e^{-2t}` and `v = e^{-2t}`.
    pub fn semigroup(&self, u: f64, v: f64, x: &[f64]) -> f64 {
        let sv = v.sqrt();
        match self {
            TestFunction::Hermite(e) => {
                let decayed = e.map_coefficients(|nu, c| c * sv.powi(nu.order() as i32));
                decayed.eval(x).expect("dimension checked by caller")
            }
            TestFunction::Bump { center, scale } => {
                let s2 = scale * scale;
                let q: f64 = x.iter().zip(center).map(|(a, c)| (sv * a - c).powi(2)).sum();
                (s2 / (s2 + u)).powf(0.5 * x.len() as f64) * (-q / (s2 + u)).exp()
            }
            TestFunction::Ball { center, radius } => {
                let sigma = u.sqrt();
                let offset = x.iter().zip(center).map(|(a, c)| (sv * a - c).powi(2)).sum::<f64>().sqrt();
                gaussian_ball_mass(x.len(), offset / sigma, radius / sigma)
            }
        }
    }

    /// `I_β f(x)`: exact on Hermite expansions, by subordination of the closed-form semigroup otherwise.
    pub fn riesz(&self, order: RieszOrder<f64>, x: &[f64], opts: &AdaptiveOptions<f64>) -> Result<f64> {
        match self {
            TestFunction::Hermite(e) => riesz_spectral(e, order).eval(x),
            _ => {
                let mean = self.mean();
                Ok(subordinate(order, |u, v| self.semigroup(u, v, x) - mean, UNIT_DEPTH, opts)?.value)
            }
        }
    }

    /// A rule on which `‖f‖_{p(·),γ}` is resolved: the supplied Gaussian rule for
    /// expansions, a polar rule on the support (or effective support) otherwise.
    pub fn norm_rule(&self, gaussian: &Rule) -> Result<Rule> {
        let opts = CenteredOptions {
            radial_order: 16,
            dyadic_levels: 0,
            inner_radius: 0.25,
            panel_width: 0.25,
            min_angular: 32,
            angular_per_radius: 24.0,
            breakpoints: Vec::new(),
        };
        match self {
            TestFunction::Hermite(_) => Ok(gaussian.clone()),
            TestFunction::Bump { center, scale } => centered_rule(center, 7.0 * scale, &opts),
            TestFunction::Ball { center, radius } => centered_rule(center, *radius, &opts),
        }
    }

    pub fn describe(&self) -> String {
        let fmt = |v: &[f64]| v.iter().map(|c| format!("{c:.4}")).collect::<Vec<_>>().join(",");
        match self {
            TestFunction::Hermite(e) => {
                let terms: Vec<String> = e.iter().map(|(nu, c)| format!("{c:.4}H{nu}")).collect();
                terms.join("+")
            }
            TestFunction::Bump { center, scale } => format!("bump(c=[{}],s={scale:.4})", fmt(center)),
            TestFunction::Ball { center, radius } => format!("ball(c=[{}],r={radius:.4})", fmt(center)),
        }
    }
}

/// `γ_d(B(δ e_1, ρ))`, the Gaussian measure of a ball at distance `δ` from the origin.
pub fn gaussian_ball_mass(dim: usize, delta: f64, rho: f64) -> f64 {
    if rho <= 0.0 {
        return 0.0;
    }
    // Outside these margins the mass differs from 0 or 1 by less than 1e-30.
    if delta - rho > 9.0 {
        return 0.0;
    }
    if rho - delta > 9.0 + 0.5 * dim as f64 {
        return 1.0;
    }
    let along = |w: f64| {
        let h2 = (rho * rho - w * w).max(0.0);
        let across = match dim {
            2 => erf(h2.sqrt()),
            _ => -(-h2).exp_m1(),
        };
        (-(w - delta).powi(2)).exp() * across / std::f64::consts::PI.sqrt()
    };
    match dim {
        1 => 0.5 * (erf(rho - delta) + erf(rho + delta)),
        _ => {
            // w = ρ sin θ removes the square-root endpoints.
            let theta = |w: f64| (w / rho).clamp(-1.0, 1.0).asin();
            let half = std::f64::consts::FRAC_PI_2;
            let mut bp = vec![-half, half];
            for w in [delta - 3.0, delta, delta + 3.0] {
                let t = theta(w);
                if t > -half && t < half {
                    bp.push(t);
                }
            }
            bp.sort_by(f64::total_cmp);
            bp.dedup();
            let opts = AdaptiveOptions {
                abs_tol: 1e-15,
                rel_tol: 1e-13,
                max_panels: 2000,
            };
            integrate(|t: f64| along(rho * t.sin()) * rho * t.cos(), &bp, &opts)
                .map(|r| r.value.clamp(0.0, 1.0))
                .unwrap_or(f64::NAN)
        }
    }
}

/// `H_ν` as a test function.
pub fn hermite_mode(nu: MultiIndex) -> TestFunction {
    let dim = nu.dim();
    TestFunction::Hermite(HermiteExpansion::from_terms(dim, [(nu, 1.0)]).expect("single term"))
}

/// Largest coordinate magnitude among the nodes of `rule`.
pub(crate) fn node_extent(rule: &Rule) -> f64 {
    rule.iter().map(|(x, _)| x.iter().fold(0.0f64, |a, v| a.max(v.abs()))).fold(0.0, f64::max)
}
