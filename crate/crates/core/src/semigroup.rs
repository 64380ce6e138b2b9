//! The Ornstein–Uhlenbeck semigroup `T_t = e^{tL}` and its Mehler kernel.
//!
//! `T_t f(x) = π^{-d/2} ∫ ω(t, x, y) f(y) dy`, equivalently the average of
//! `f(e^{-t} x + √(1 - e^{-2t}) z)` over `z ~ γ_d`.

use crate::error::{check_dim, Error, Result};
use crate::quadrature::{lebesgue_box_rule, Measure, QuadratureRule};
use crate::scalar::Scalar;

/// Default bound on the kernel mass lying outside the quadrature box.
pub const DEFAULT_TAIL: f64 = 1e-12;

/// `ω(t, x, y) = e^{-|y - e^{-t}x|^2 / (1 - e^{-2t})} / (1 - e^{-2t})^{d/2}`.
pub fn omega<S: Scalar>(t: S, x: &[S], y: &[S]) -> Result<S> {
    check_dim(x.len(), y.len())?;
    if !(t > S::zero()) {
        return Err(Error::InvalidArgument(format!("omega needs t > 0, got {t}")));
    }
    let u = -(-S::of(2.0) * t).exp_m1();
    Ok(omega_u(u, x, y))
}

/// The Mehler kernel written in `u = 1 - e^{-2t}`.
pub(crate) fn omega_u<S: Scalar>(u: S, x: &[S], y: &[S]) -> S {
    let s = (S::one() - u).sqrt();
    let q = x.iter().zip(y).fold(S::zero(), |acc, (&xi, &yi)| {
        let d = yi - s * xi;
        acc + d * d
    });
    let half_d = S::of_usize(x.len()) / S::of(2.0);
    (-q / u - half_d * u.ln()).exp()
}

/// Mass of the Mehler kernel at `(t, x)` outside `[-extent, extent]^d`, bounded by a union over axes.
pub fn kernel_tail<S: Scalar>(t: S, x: &[S], extent: S) -> S {
    let sigma = (-(-S::of(2.0) * t).exp_m1()).sqrt();
    let decay = (-t).exp();
    x.iter().fold(S::zero(), |acc, &xi| {
        let m = decay * xi;
        acc + S::of(0.5) * (((extent - m) / sigma).erfc_fn() + ((extent + m) / sigma).erfc_fn())
    })
}

/// `T_t f(x)` by quadrature.
///
/// A Gaussian rule integrates `f(e^{-t}x + σ z)` against `γ_d` and is exact for
/// polynomial `f` of low enough degree. A box rule integrates the Mehler kernel
/// and fails with [`Error::TailTolerance`] if the kernel mass outside the box
/// exceeds `tail`.
pub fn apply_tt<S, F>(f: F, t: S, x: &[S], rule: &QuadratureRule<S>, tail: S) -> Result<S>
where
    S: Scalar,
    F: Fn(&[S]) -> S,
{
    check_dim(rule.dim(), x.len())?;
    if !(t > S::zero()) {
        return Err(Error::InvalidArgument(format!("T_t needs t > 0, got {t}")));
    }
    let u = -(-S::of(2.0) * t).exp_m1();
    match rule.measure() {
        Measure::Gaussian => {
            let sigma = u.sqrt();
            let decay = (-t).exp();
            let mut p = vec![S::zero(); x.len()];
            Ok(rule.integrate(|z| {
                for ((pi, &xi), &zi) in p.iter_mut().zip(x).zip(z) {
                    *pi = decay * xi + sigma * zi;
                }
                f(&p)
            }))
        }
        Measure::LebesgueBox { extent } => {
            let mass = kernel_tail(t, x, extent);
            if mass > tail {
                return Err(Error::TailTolerance {
                    tail: mass.as_f64(),
                    tolerance: tail.as_f64(),
                });
            }
            let norm = S::PI().powf(-S::of_usize(x.len()) / S::of(2.0));
            Ok(norm * rule.integrate(|y| omega_u(u, x, y) * f(y)))
        }
    }
}

/// Box rule sized and resolved for the Mehler kernel at `(t, x)` with outside mass `≤ tail`.
pub fn mehler_box_rule<S: Scalar>(t: S, x: &[S], tail: S) -> Result<QuadratureRule<S>> {
    if !(t > S::zero()) || !(tail > S::zero()) {
        return Err(Error::InvalidArgument("mehler_box_rule needs t > 0 and tail > 0".into()));
    }
    let sigma = (-(-S::of(2.0) * t).exp_m1()).sqrt().as_f64();
    let decay = (-t).exp().as_f64();
    let centre = x.iter().fold(0.0f64, |a, v| a.max(v.as_f64().abs())) * decay;
    let per_axis = tail.as_f64() / x.len().max(1) as f64;
    let mut k = 1.0;
    while libm::erfc(k) > per_axis && k < 40.0 {
        k += 0.25;
    }
    let extent = centre + k * sigma;
    let panels = ((2.0 * extent) / (0.75 * sigma)).ceil().max(1.0) as usize;
    lebesgue_box_rule(S::of(extent), panels, 12, x.len())
}
