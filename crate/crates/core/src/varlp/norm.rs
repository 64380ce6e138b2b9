use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use crate::scalar::Scalar;
use crate::varlp::ExponentField;

/// Default relative bracket width for [`luxemburg_norm`].
pub const DEFAULT_BISECTION_TOL: f64 = 1e-9;

const EXPANSION: f64 = 4.0;
const MAX_EXPANSIONS: usize = 200;

/// `|f|`, `p` and `γ_d`-weights at the nodes of a rule, so the modular
/// `λ ↦ ρ(f/λ)` is a cheap weighted sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularTable {
    abs: Vec<f64>,
    exps: Vec<f64>,
    weights: Vec<f64>,
}

impl ModularTable {
    pub fn new<S, F>(f: F, p: &ExponentField, rule: &QuadratureRule<S>) -> Self
    where
        S: Scalar,
        F: Fn(&[S]) -> S,
    {
        let weights = rule.gaussian_weights().into_iter().map(|w| w.as_f64()).collect();
        let exps = rule.iter().map(|(x, _)| p.eval_f64(x)).collect();
        let abs = rule.iter().map(|(x, _)| f(x).as_f64().abs()).collect();
        Self { abs, exps, weights }
    }

    /// Builds a table from precomputed values, exponents and `γ_d`-weights.
    pub fn from_parts(values: &[f64], exps: &[f64], weights: &[f64]) -> Result<Self> {
        if values.len() != exps.len() || values.len() != weights.len() {
            return Err(Error::InvalidArgument("modular table parts differ in length".into()));
        }
        Ok(Self {
            abs: values.iter().map(|v| v.abs()).collect(),
            exps: exps.to_vec(),
            weights: weights.to_vec(),
        })
    }

    /// `ρ(f/λ) = Σ w_i (|f_i|/λ)^{p_i}`.
    pub fn modular_at(&self, lambda: f64) -> f64 {
        self.abs
            .iter()
            .zip(&self.exps)
            .zip(&self.weights)
            .filter(|((a, _), _)| **a > 0.0)
            .map(|((a, p), w)| w * (a / lambda).powf(*p))
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.abs.iter().zip(&self.weights).all(|(a, w)| *a == 0.0 || *w == 0.0)
    }

    /// `inf{λ > 0 : ρ(f/λ) ≤ 1}` by bisection to relative width `tol`.
    pub fn luxemburg(&self, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("bisection tolerance must be positive".into()));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let p_minus = self.exps.iter().copied().fold(f64::INFINITY, f64::min);
        let rho = self.modular_at(1.0);
        let start = if rho.is_finite() { rho.max(1.0).powf(1.0 / p_minus) } else { 1.0 };
        let (mut lo, mut hi);
        if self.modular_at(start) <= 1.0 {
            hi = start;
            lo = start / EXPANSION;
            let mut n = 0;
            while self.modular_at(lo) <= 1.0 {
                hi = lo;
                lo /= EXPANSION;
                n += 1;
                if n > MAX_EXPANSIONS || lo == 0.0 {
                    return Ok(0.0);
                }
            }
        } else {
            lo = start;
            hi = start * EXPANSION;
            let mut n = 0;
            loop {
                let m = self.modular_at(hi);
                if m <= 1.0 {
                    break;
                }
                lo = hi;
                hi *= EXPANSION;
                n += 1;
                if n > MAX_EXPANSIONS || !hi.is_finite() {
                    return Err(Error::Divergence { lambda: hi });
                }
            }
        }
        while hi - lo > tol * hi {
            let mid = 0.5 * (lo + hi);
            if self.modular_at(mid) <= 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `ρ_{p(·),γ}(f) = ∫ |f|^{p(x)} dγ_d`.
pub fn modular<S, F>(f: F, p: &ExponentField, rule: &QuadratureRule<S>) -> S
where
    S: Scalar,
    F: Fn(&[S]) -> S,
{
    S::of(ModularTable::new(f, p, rule).modular_at(1.0))
}

/// `‖f‖_{p(·),γ} = inf{λ > 0 : ρ(f/λ) ≤ 1}`.
pub fn luxemburg_norm<S, F>(f: F, p: &ExponentField, rule: &QuadratureRule<S>, tol: S) -> Result<S>
where
    S: Scalar,
    F: Fn(&[S]) -> S,
{
    ModularTable::new(f, p, rule).luxemburg(tol.as_f64()).map(S::of)
}

/// `(∫|fg| dγ_d, 2 ‖f‖_{p(·)} ‖g‖_{p'(·)})`.
pub fn holder_check<S, F, G>(f: F, g: G, p: &ExponentField, rule: &QuadratureRule<S>, tol: S) -> Result<(S, S)>
where
    S: Scalar,
    F: Fn(&[S]) -> S,
    G: Fn(&[S]) -> S,
{
    let conj = p.conjugate()?;
    let lhs = rule.integrate_gaussian(|x| (f(x) * g(x)).abs());
    let rhs = S::of(2.0) * luxemburg_norm(&f, p, rule, tol)? * luxemburg_norm(&g, &conj, rule, tol)?;
    Ok((lhs, rhs))
}
