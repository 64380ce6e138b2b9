//! Physicists' Hermite polynomials and expansions in `L^2(γ_d)`.
//!
//! Throughout the crate `γ_d` is the probability measure `π^{-d/2} e^{-|x|^2} dx`,
//! so `∫ H_ν H_μ dγ_d = δ_{νμ} ∏ 2^{ν_i} ν_i!`.

mod expansion;
mod multi_index;

pub use expansion::{expansion_eval, HermiteExpansion};
pub use multi_index::MultiIndex;

use crate::error::{check_dim, Error, Result};
use crate::quadrature::QuadratureRule;
use crate::scalar::Scalar;

/// `H_n(x)` by the recurrence `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite_1d<S: Scalar>(n: u32, x: S) -> S {
    let two = S::of(2.0);
    let mut prev = S::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two * x;
    for k in 1..n {
        let next = two * x * cur - two * S::of(k as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `[H_0(x), …, H_n(x)]`.
pub fn hermite_table<S: Scalar>(n: u32, x: S) -> Vec<S> {
    let two = S::of(2.0);
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(S::one());
    if n >= 1 {
        out.push(two * x);
    }
    for k in 1..n as usize {
        let next = two * x * out[k] - two * S::of_usize(k) * out[k - 1];
        out.push(next);
    }
    out
}

/// `H_ν(x) = ∏ H_{ν_i}(x_i)`.
pub fn hermite_eval<S: Scalar>(nu: &MultiIndex, x: &[S]) -> Result<S> {
    check_dim(nu.dim(), x.len())?;
    Ok(nu
        .entries()
        .iter()
        .zip(x)
        .fold(S::one(), |acc, (&k, &xi)| acc * hermite_1d(k, xi)))
}

/// `‖H_ν‖^2_{L^2(γ_d)} = ∏ 2^{ν_i} ν_i!`.
pub fn hermite_norm_sq<S: Scalar>(nu: &MultiIndex) -> S {
    nu.entries().iter().fold(S::one(), |acc, &k| {
        (1..=k).fold(acc, |a, j| a * S::of(2.0 * j as f64))
    })
}

/// Hermite coefficient `⟨f, H_ν⟩_{γ_d} / ‖H_ν‖^2`.
///
/// A Lebesgue rule is accepted and weighted by the Gaussian density explicitly.
pub fn project<S, F>(f: F, nu: &MultiIndex, rule: &QuadratureRule<S>) -> Result<S>
where
    S: Scalar,
    F: Fn(&[S]) -> S,
{
    check_dim(rule.dim(), nu.dim())?;
    let inner = rule.integrate_gaussian(|x| {
        let h = nu
            .entries()
            .iter()
            .zip(x)
            .fold(S::one(), |acc, (&k, &xi)| acc * hermite_1d(k, xi));
        f(x) * h
    });
    if !inner.is_finite() {
        return Err(Error::InvalidArgument(format!("projection onto {nu} is not finite")));
    }
    Ok(inner / hermite_norm_sq(nu))
}
