use crate::error::{Error, Result};
use crate::quadrature::gauss::{gauss_hermite, gauss_legendre, Rule1d};
use crate::scalar::{norm_sq, Scalar};

/// Default cap on the number of nodes in a tensor-product rule.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// The measure a [`QuadratureRule`] integrates against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure<S> {
    /// The Gaussian probability measure `π^{-d/2} e^{-|x|^2} dx`.
    Gaussian,
    /// Lebesgue measure on a region inside the box `[-extent, extent]^d`.
    LebesgueBox { extent: S },
}

/// Nodes and weights in `ℝ^d`. Nodes are stored flat, `dim` coordinates each.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<S> {
    dim: usize,
    nodes: Vec<S>,
    weights: Vec<S>,
    measure: Measure<S>,
}

impl<S: Scalar> QuadratureRule<S> {
    /// Builds a rule from raw parts, checking the shape invariants.
    pub fn new(dim: usize, nodes: Vec<S>, weights: Vec<S>, measure: Measure<S>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if nodes.len() != dim * weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} node coordinates do not match {} weights in dimension {dim}",
                nodes.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w > S::zero())) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        let rule = Self {
            dim,
            nodes,
            weights,
            measure,
        };
        if rule.measure == Measure::Gaussian {
            let total = rule.weights.iter().fold(S::zero(), |a, &w| a + w);
            let slack = S::of(1e-12).fmax(S::of(64.0) * S::epsilon());
            if (total - S::one()).abs() > slack {
                return Err(Error::InvalidArgument(format!(
                    "Gaussian rule weights sum to {total}, not 1"
                )));
            }
        }
        Ok(rule)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn measure(&self) -> Measure<S> {
        self.measure
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn node(&self, i: usize) -> &[S] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[S], S)> + '_ {
        self.nodes.chunks_exact(self.dim).zip(self.weights.iter().copied())
    }

    /// `Σ w_i f(x_i)` against the rule's own measure.
    pub fn integrate<F: FnMut(&[S]) -> S>(&self, mut f: F) -> S {
        self.iter().fold(S::zero(), |acc, (x, w)| acc + w * f(x))
    }

    /// Weights expressing integration against `γ_d`, whatever the rule's measure.
    ///
    /// Lebesgue weights pick up the explicit density `π^{-d/2} e^{-|x|^2}`.
    pub fn gaussian_weights(&self) -> Vec<S> {
        match self.measure {
            Measure::Gaussian => self.weights.clone(),
            Measure::LebesgueBox { .. } => {
                let norm = S::PI().powf(-S::of_usize(self.dim) / S::of(2.0));
                self.iter().map(|(x, w)| w * norm * (-norm_sq(x)).exp()).collect()
            }
        }
    }

    /// `∫ f dγ_d` using [`Self::gaussian_weights`].
    pub fn integrate_gaussian<F: FnMut(&[S]) -> S>(&self, mut f: F) -> S {
        self.gaussian_weights()
            .into_iter()
            .zip(self.nodes.chunks_exact(self.dim))
            .fold(S::zero(), |acc, (w, x)| acc + w * f(x))
    }

    fn tensor(dim: usize, axis: &Rule1d, measure: Measure<S>, budget: usize) -> Result<Self> {
        let n = axis.len();
        let total = checked_power(n, dim).filter(|&t| t <= budget).ok_or(Error::NodeBudget {
            requested: checked_power(n, dim).unwrap_or(usize::MAX),
            budget,
        })?;
        let mut nodes = Vec::with_capacity(total * dim);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut w = 1.0;
            for &i in &idx {
                nodes.push(S::of(axis.nodes[i]));
                w *= axis.weights[i];
            }
            weights.push(S::of(w));
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < n {
                    break;
                }
                *slot = 0;
            }
        }
        Self::new(dim, nodes, weights, measure)
    }
}

fn checked_power(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

/// Tensor Gauss–Hermite rule against `γ_d`, exact for per-axis degree `≤ 2n - 1`.
pub fn gaussian_rule<S: Scalar>(points_per_axis: usize, dim: usize) -> Result<QuadratureRule<S>> {
    gaussian_rule_with_budget(points_per_axis, dim, DEFAULT_NODE_BUDGET)
}

pub fn gaussian_rule_with_budget<S: Scalar>(
    points_per_axis: usize,
    dim: usize,
    budget: usize,
) -> Result<QuadratureRule<S>> {
    if points_per_axis == 0 || dim == 0 {
        return Err(Error::InvalidArgument(
            "gaussian_rule needs positive points_per_axis and dimension".into(),
        ));
    }
    let mut axis = gauss_hermite(points_per_axis);
    let sqrt_pi = std::f64::consts::PI.sqrt();
    axis.weights.iter_mut().for_each(|w| *w /= sqrt_pi);
    // Renormalise so the product weights sum to 1 in floating point.
    let total: f64 = axis.weights.iter().sum();
    axis.weights.iter_mut().for_each(|w| *w /= total);
    QuadratureRule::tensor(dim, &axis, Measure::Gaussian, budget)
}

/// Composite Gauss–Legendre tensor rule on `[-half_width, half_width]^d`.
pub fn lebesgue_box_rule<S: Scalar>(
    half_width: S,
    panels_per_axis: usize,
    order: usize,
    dim: usize,
) -> Result<QuadratureRule<S>> {
    if !(half_width > S::zero()) || panels_per_axis == 0 || order == 0 || dim == 0 {
        return Err(Error::InvalidArgument("invalid box rule parameters".into()));
    }
    let h = half_width.as_f64();
    let base = gauss_legendre(order);
    let step = 2.0 * h / panels_per_axis as f64;
    let mut axis = Rule1d {
        nodes: Vec::new(),
        weights: Vec::new(),
    };
    for p in 0..panels_per_axis {
        let a = -h + step * p as f64;
        let panel = base.mapped(a, a + step);
        axis.nodes.extend(panel.nodes);
        axis.weights.extend(panel.weights);
    }
    QuadratureRule::tensor(dim, &axis, Measure::LebesgueBox { extent: half_width }, DEFAULT_NODE_BUDGET)
}

/// Layout of a [`centered_rule`].
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredOptions {
    /// Gauss–Legendre order on each radial panel.
    pub radial_order: usize,
    /// Number of panels halving toward the centre below `inner_radius`.
    pub dyadic_levels: usize,
    /// Radius below which panels are graded geometrically.
    pub inner_radius: f64,
    /// Largest radial panel width outside `inner_radius`.
    pub panel_width: f64,
    /// Angular nodes at least this many per full circle.
    pub min_angular: usize,
    /// Extra angular nodes per unit radius.
    pub angular_per_radius: f64,
    /// Additional radii at which the radial partition must break.
    pub breakpoints: Vec<f64>,
}

impl Default for CenteredOptions {
    fn default() -> Self {
        Self {
            radial_order: 10,
            dyadic_levels: 36,
            inner_radius: 0.5,
            panel_width: 0.5,
            min_angular: 24,
            angular_per_radius: 12.0,
            breakpoints: Vec::new(),
        }
    }
}

/// Lebesgue rule on the ball `B(center, radius)` in polar/spherical coordinates.
///
/// Radial panels halve toward the centre, so integrands with an integrable
/// singularity at `center` are resolved and no node ever coincides with it.
pub fn centered_rule<S: Scalar>(
    center: &[S],
    radius: S,
    opts: &CenteredOptions,
) -> Result<QuadratureRule<S>> {
    let dim = center.len();
    if dim == 0 || dim > 3 {
        return Err(Error::InvalidArgument(format!(
            "centered rules support dimensions 1 to 3, got {dim}"
        )));
    }
    if !(radius > S::zero()) || opts.radial_order == 0 {
        return Err(Error::InvalidArgument("invalid centered rule parameters".into()));
    }
    let r_max = radius.as_f64();
    let radial = radial_rule(r_max, opts);
    let c: Vec<f64> = center.iter().map(|v| v.as_f64()).collect();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut push = |p: &[f64], w: f64| {
        nodes.extend(p.iter().map(|&v| S::of(v)));
        weights.push(S::of(w));
    };
    match dim {
        1 => {
            for (&r, &w) in radial.nodes.iter().zip(&radial.weights) {
                push(&[c[0] - r], w);
                push(&[c[0] + r], w);
            }
        }
        2 => {
            for (&r, &w) in radial.nodes.iter().zip(&radial.weights) {
                let m = angular_count(r, opts);
                let dt = 2.0 * std::f64::consts::PI / m as f64;
                for j in 0..m {
                    let th = dt * (j as f64 + 0.5);
                    push(&[c[0] + r * th.cos(), c[1] + r * th.sin()], w * r * dt);
                }
            }
        }
        _ => {
            for (&r, &w) in radial.nodes.iter().zip(&radial.weights) {
                let m = angular_count(r, opts);
                let polar = gauss_legendre(m.div_ceil(2).max(2));
                let dphi = 2.0 * std::f64::consts::PI / m as f64;
                for (&ct, &wt) in polar.nodes.iter().zip(&polar.weights) {
                    let st = (1.0 - ct * ct).sqrt();
                    for j in 0..m {
                        let ph = dphi * (j as f64 + 0.5);
                        push(
                            &[c[0] + r * st * ph.cos(), c[1] + r * st * ph.sin(), c[2] + r * ct],
                            w * r * r * wt * dphi,
                        );
                    }
                }
            }
        }
    }
    let extent = c.iter().fold(0.0f64, |a, v| a.max(v.abs())) + r_max;
    QuadratureRule::new(dim, nodes, weights, Measure::LebesgueBox { extent: S::of(extent) })
}

fn angular_count(r: f64, opts: &CenteredOptions) -> usize {
    let m = (opts.min_angular as f64).max((opts.angular_per_radius * r).ceil()) as usize;
    m.div_ceil(4) * 4
}

fn radial_rule(r_max: f64, opts: &CenteredOptions) -> Rule1d {
    let inner = opts.inner_radius.min(r_max);
    let mut bp = vec![0.0];
    for k in (1..=opts.dyadic_levels).rev() {
        bp.push(inner * 0.5f64.powi(k as i32));
    }
    bp.push(inner);
    if r_max > inner {
        let n = ((r_max - inner) / opts.panel_width).ceil().max(1.0) as usize;
        let step = (r_max - inner) / n as f64;
        for k in 1..=n {
            bp.push(inner + step * k as f64);
        }
    }
    for &extra in &opts.breakpoints {
        if extra > 0.0 && extra < r_max {
            bp.push(extra);
        }
    }
    bp.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bp.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs().max(1e-300));
    let base = gauss_legendre(opts.radial_order);
    let mut out = Rule1d {
        nodes: Vec::new(),
        weights: Vec::new(),
    };
    for w in bp.windows(2) {
        let panel = base.mapped(w[0], w[1]);
        out.nodes.extend(panel.nodes);
        out.weights.extend(panel.weights);
    }
    out
}
