//! The Gaussian Riesz potential `I_β = (-L)^{-β/2} Π_0`.
//!
//! On Hermite modes `I_β H_ν = |ν|^{-β/2} H_ν` (and `I_β H_0 = 0`). For general
//! functions `I_β f(x) = Γ(β/2)^{-1} ∫_0^∞ t^{β/2-1} (T_t f(x) - ∫f dγ_d) dt`,
//! which after `u = 1 - e^{-2t}` becomes an integral over `u ∈ (0, 1)` with
//! integrable singularities at both ends.

mod kernel;

pub(crate) use kernel::kernel_depth;
pub use kernel::{
    kernel_rule, riesz_apply_kernel, riesz_kernel_eval, riesz_kernel_integral, riesz_split_apply, ApplyOptions,
    KernelQuadrature, SplitValue,
};

use crate::error::{Error, Result};
use crate::hermite::HermiteExpansion;
use crate::quadrature::{integrate_unit, AdaptiveOptions, Integral};
use crate::scalar::Scalar;

/// Order `β > 0` of the potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszOrder<S> {
    beta: S,
}

impl<S: Scalar> RieszOrder<S> {
    pub fn new(beta: S) -> Result<Self> {
        if beta > S::zero() && beta.is_finite() {
            Ok(Self { beta })
        } else {
            Err(Error::InvalidArgument(format!("Riesz order must be positive and finite, got {beta}")))
        }
    }

    pub fn beta(&self) -> S {
        self.beta
    }

    /// `β / 2`.
    pub fn half(&self) -> S {
        self.beta / S::of(2.0)
    }

    /// Spectral multiplier on modes of order `n`: `n^{-β/2}`, and `0` for `n = 0`.
    pub fn multiplier(&self, n: u32) -> S {
        if n == 0 {
            S::zero()
        } else {
            S::of(n as f64).powf(-self.half())
        }
    }
}

/// `I_β` on a Hermite series: `c_ν ↦ |ν|^{-β/2} c_ν`, with the constant term removed.
pub fn riesz_spectral<S: Scalar>(e: &HermiteExpansion<S>, order: RieszOrder<S>) -> HermiteExpansion<S> {
    e.map_coefficients(|nu, c| c * order.multiplier(nu.order()))
}

/// `-log √(1 - u)` computed from whichever of `u`, `v = 1 - u` is the small one.
#[inline]
pub(crate) fn log_weight<S: Scalar>(u: S, v: S) -> S {
    if u < S::of(0.5) {
        -S::of(0.5) * (-u).ln_1p()
    } else {
        -S::of(0.5) * v.ln()
    }
}

/// `Γ(β/2)^{-1} ∫_0^1 (-log √(1-u))^{β/2-1} g(u, v) du / (2v)`.
///
/// With `g = T_t f(x) - ∫ f dγ_d` written in `u = 1 - e^{-2t}` this is `I_β f(x)`.
pub fn subordinate<S, G>(order: RieszOrder<S>, mut g: G, depth: usize, opts: &AdaptiveOptions<S>) -> Result<Integral<S>>
where
    S: Scalar,
    G: FnMut(S, S) -> S,
{
    let power = order.half() - S::one();
    let gamma = order.half().gamma_fn();
    let scaled = AdaptiveOptions {
        abs_tol: opts.abs_tol * gamma,
        rel_tol: opts.rel_tol,
        max_panels: opts.max_panels,
    };
    let two = S::of(2.0);
    let mut raw = integrate_unit(
        |u, v| {
            let g = g(u, v);
            if g == S::zero() {
                return S::zero();
            }
            log_weight(u, v).powf(power) * g / (two * v)
        },
        depth,
        &scaled,
    )?;
    raw.value /= gamma;
    raw.error /= gamma;
    Ok(raw)
}
