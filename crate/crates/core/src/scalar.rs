//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Besides the usual [`Float`] surface this carries the handful of special
/// functions the kernels need (`Γ`, `erf`). They are evaluated in double
/// precision and rounded to the target type.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn of(x: f64) -> Self;

    /// Widening conversion used for diagnostics and reports.
    fn as_f64(self) -> f64;

    fn of_usize(n: usize) -> Self {
        Self::of(n as f64)
    }

    fn gamma_fn(self) -> Self {
        Self::of(statrs::function::gamma::gamma(self.as_f64()))
    }

    fn ln_gamma_fn(self) -> Self {
        Self::of(statrs::function::gamma::ln_gamma(self.as_f64()))
    }

    fn erf_fn(self) -> Self {
        Self::of(libm::erf(self.as_f64()))
    }

    fn erfc_fn(self) -> Self {
        Self::of(libm::erfc(self.as_f64()))
    }

    /// `max(a, b)` that ignores NaN in either argument.
    fn fmax(self, other: Self) -> Self {
        if self.is_nan() || other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

/// Squared Euclidean norm.
#[inline]
pub fn norm_sq<S: Scalar>(x: &[S]) -> S {
    x.iter().fold(S::zero(), |acc, &v| acc + v * v)
}

#[inline]
pub fn norm<S: Scalar>(x: &[S]) -> S {
    norm_sq(x).sqrt()
}

#[inline]
pub fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (&a, &b)| acc + a * b)
}

/// `|x - y|^2`.
#[inline]
pub fn dist_sq<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (&a, &b)| {
        let d = a - b;
        acc + d * d
    })
}

#[inline]
pub fn dist<S: Scalar>(x: &[S], y: &[S]) -> S {
    dist_sq(x, y).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn special_functions_in_both_precisions() {
        assert_relative_eq!(0.5f64.gamma_fn(), std::f64::consts::PI.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(0.5f32.gamma_fn(), std::f32::consts::PI.sqrt(), epsilon = 1e-6);
        assert_relative_eq!(1.0f64.erf_fn() + 1.0f64.erfc_fn(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn fmax_skips_nan() {
        assert_eq!(f64::NAN.fmax(2.0), 2.0);
        assert_eq!(2.0f64.fmax(f64::NAN), 2.0);
    }

    #[test]
    fn vector_helpers() {
        let x = [3.0f64, 4.0];
        let y = [0.0f64, 0.0];
        assert_eq!(norm(&x), 5.0);
        assert_eq!(dist(&x, &y), 5.0);
        assert_eq!(dot(&x, &x), 25.0);
    }
}
