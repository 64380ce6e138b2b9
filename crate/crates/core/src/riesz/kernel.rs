use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::geometry::local_radius;
use crate::quadrature::{centered_rule, AdaptiveOptions, CenteredOptions, Integral, QuadratureRule};
use crate::riesz::{subordinate, RieszOrder};
use crate::scalar::{dist_sq, dot, norm, norm_sq, Scalar};

/// `ω(u) - ω(∞)` in the variable `u = 1 - e^{-2t}`, arranged to keep the
/// cancellation at `u → 1` exact.
struct Bracket<'a, S> {
    x: &'a [S],
    y: &'a [S],
    xx: S,
    yy: S,
    xy: S,
    half_d: S,
    tail: S,
}

impl<'a, S: Scalar> Bracket<'a, S> {
    fn new(x: &'a [S], y: &'a [S]) -> Self {
        let yy = norm_sq(y);
        Self {
            x,
            y,
            xx: norm_sq(x),
            yy,
            xy: dot(x, y),
            half_d: S::of_usize(x.len()) / S::of(2.0),
            tail: (-yy).exp(),
        }
    }

    #[inline]
    fn eval(&self, u: S, v: S) -> S {
        let sv = v.sqrt();
        let half = S::of(0.5);
        // E = |y|^2 - |y - √v x|^2 / u - (d/2) log u
        let e = if u < half {
            let shift = u / (S::one() + sv);
            let q = self.x.iter().zip(self.y).fold(S::zero(), |acc, (&xi, &yi)| {
                let d = (yi - xi) + xi * shift;
                acc + d * d
            });
            self.yy - q / u - self.half_d * u.ln()
        } else {
            -(v * (self.xx + self.yy) - S::of(2.0) * sv * self.xy) / u - self.half_d * (-v).ln_1p()
        };
        if e > S::one() {
            (e - self.yy).exp() - self.tail
        } else {
            self.tail * e.exp_m1()
        }
    }
}

pub(crate) fn kernel_depth<S: Scalar>(x: &[S], y: &[S]) -> usize {
    let r2 = dist_sq(x, y).as_f64();
    if r2 <= 0.0 {
        return 64;
    }
    let need = (-r2.log2()).ceil() + 6.0;
    (need.max(12.0) as usize).min(96)
}

/// `N_{β/2}(x, y)` with its error estimate.
///
/// The stopping rule of `opts` is applied to the kernel value itself.
pub fn riesz_kernel_integral<S: Scalar>(
    order: RieszOrder<S>,
    x: &[S],
    y: &[S],
    opts: &AdaptiveOptions<S>,
) -> Result<Integral<S>> {
    check_dim(x.len(), y.len())?;
    let norm = S::PI().powf(-S::of_usize(x.len()) / S::of(2.0));
    let scaled = AdaptiveOptions {
        abs_tol: opts.abs_tol / norm,
        rel_tol: opts.rel_tol,
        max_panels: opts.max_panels,
    };
    let bracket = Bracket::new(x, y);
    let mut r = subordinate(order, |u, v| bracket.eval(u, v), kernel_depth(x, y), &scaled)?;
    r.value *= norm;
    r.error *= norm;
    Ok(r)
}

/// `N_{β/2}(x, y)` to absolute accuracy `tol`.
pub fn riesz_kernel_eval<S: Scalar>(order: RieszOrder<S>, x: &[S], y: &[S], tol: S) -> Result<S> {
    if !(tol > S::zero()) {
        return Err(Error::InvalidArgument("kernel tolerance must be positive".into()));
    }
    Ok(riesz_kernel_integral(order, x, y, &AdaptiveOptions::absolute(tol))?.value)
}

/// Layout and accuracy of the spatial quadrature used to apply `N_{β/2}(x, ·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApplyOptions<S> {
    /// Stopping rule for each kernel value.
    pub kernel: AdaptiveOptions<S>,
    /// The rule covers `B(x, |x| + reach)`.
    pub reach: S,
    pub radial_order: usize,
    pub dyadic_levels: usize,
    pub panel_width: f64,
    pub min_angular: usize,
    pub angular_per_radius: f64,
}

impl<S: Scalar> Default for ApplyOptions<S> {
    fn default() -> Self {
        Self {
            kernel: AdaptiveOptions {
                abs_tol: S::of(1e-13),
                rel_tol: S::of(1e-10),
                max_panels: 4000,
            },
            reach: S::of(6.5),
            radial_order: 10,
            dyadic_levels: 24,
            panel_width: 0.5,
            min_angular: 24,
            angular_per_radius: 12.0,
        }
    }
}

impl<S: Scalar> ApplyOptions<S> {
    /// A cheaper layout for dimension 2 and above.
    pub fn coarse() -> Self {
        Self {
            kernel: AdaptiveOptions {
                abs_tol: S::of(1e-11),
                rel_tol: S::of(1e-8),
                max_panels: 4000,
            },
            reach: S::of(6.0),
            radial_order: 8,
            dyadic_levels: 16,
            panel_width: 0.5,
            min_angular: 16,
            angular_per_radius: 8.0,
        }
    }
}

/// Polar/spherical rule centred at `x` with a radial break at the admissible radius `d · m(x)`.
pub fn kernel_rule<S: Scalar>(x: &[S], opts: &ApplyOptions<S>) -> Result<QuadratureRule<S>> {
    let radius = norm(x) + opts.reach;
    let centered = CenteredOptions {
        radial_order: opts.radial_order,
        dyadic_levels: opts.dyadic_levels,
        inner_radius: 0.5,
        panel_width: opts.panel_width,
        min_angular: opts.min_angular,
        angular_per_radius: opts.angular_per_radius,
        breakpoints: vec![local_radius(x).as_f64()],
    };
    centered_rule(x, radius, &centered)
}

/// Kernel values `N_{β/2}(x, y_i)` at the nodes of a spatial rule, ready to be applied
/// to any number of functions.
#[derive(Debug, Clone)]
pub struct KernelQuadrature<S> {
    x: Vec<S>,
    rule: QuadratureRule<S>,
    values: Vec<S>,
    local: Vec<bool>,
}

/// `I_β f(x)` split over the admissible ball `B_h(x)` and its complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitValue<S> {
    pub local: S,
    pub global: S,
}

impl<S: Scalar> SplitValue<S> {
    pub fn total(&self) -> S {
        self.local + self.global
    }
}

impl<S: Scalar> KernelQuadrature<S> {
    /// Tabulates the kernel on [`kernel_rule`]`(x)`.
    pub fn new(order: RieszOrder<S>, x: &[S], opts: &ApplyOptions<S>) -> Result<Self> {
        let rule = kernel_rule(x, opts)?;
        Self::on_rule(order, x, rule, &opts.kernel)
    }

    /// Tabulates the kernel on an arbitrary Lebesgue rule. No node may coincide with `x`.
    pub fn on_rule(order: RieszOrder<S>, x: &[S], rule: QuadratureRule<S>, kernel: &AdaptiveOptions<S>) -> Result<Self> {
        check_dim(rule.dim(), x.len())?;
        if matches!(rule.measure(), crate::quadrature::Measure::Gaussian) {
            return Err(Error::WrongMeasure("kernel application needs a Lebesgue rule".into()));
        }
        let values = (0..rule.len())
            .into_par_iter()
            .map(|i| {
                let y = rule.node(i);
                if y == x {
                    return Err(Error::Degenerate("quadrature node coincides with the kernel singularity".into()));
                }
                riesz_kernel_integral(order, x, y, kernel).map(|r| r.value)
            })
            .collect::<Result<Vec<S>>>()?;
        let radius = local_radius(x);
        let local = rule.iter().map(|(y, _)| dist_sq(x, y) < radius * radius).collect();
        Ok(Self {
            x: x.to_vec(),
            rule,
            values,
            local,
        })
    }

    pub fn point(&self) -> &[S] {
        &self.x
    }

    pub fn rule(&self) -> &QuadratureRule<S> {
        &self.rule
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// `∫ N_{β/2}(x, y) f(y) dy`.
    pub fn apply<F: Fn(&[S]) -> S>(&self, f: F) -> S {
        self.split(f).total()
    }

    pub fn split<F: Fn(&[S]) -> S>(&self, f: F) -> SplitValue<S> {
        let mut out = SplitValue {
            local: S::zero(),
            global: S::zero(),
        };
        for (((y, w), &k), &loc) in self.rule.iter().zip(&self.values).zip(&self.local) {
            let term = w * k * f(y);
            if loc {
                out.local += term;
            } else {
                out.global += term;
            }
        }
        out
    }
}

/// `∫ N_{β/2}(x, y) f(y) dy` on a caller-supplied Lebesgue rule, with kernel values to
/// relative accuracy `tol`.
pub fn riesz_apply_kernel<S, F>(f: F, order: RieszOrder<S>, x: &[S], rule: &QuadratureRule<S>, tol: S) -> Result<S>
where
    S: Scalar,
    F: Fn(&[S]) -> S,
{
    let kernel = kernel_options(tol)?;
    Ok(KernelQuadrature::on_rule(order, x, rule.clone(), &kernel)?.apply(f))
}

/// `I_β f(x)` split into the part from `B_h(x)` and the part from its complement,
/// on the default [`kernel_rule`].
pub fn riesz_split_apply<S, F>(f: F, order: RieszOrder<S>, x: &[S], opts: &ApplyOptions<S>) -> Result<SplitValue<S>>
where
    S: Scalar,
    F: Fn(&[S]) -> S,
{
    Ok(KernelQuadrature::new(order, x, opts)?.split(f))
}

fn kernel_options<S: Scalar>(tol: S) -> Result<AdaptiveOptions<S>> {
    if !(tol > S::zero()) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    Ok(AdaptiveOptions {
        abs_tol: tol * S::of(1e-6),
        rel_tol: (tol * S::of(1e-3)).min(S::of(1e-8)),
        max_panels: 4000,
    })
}
