//! Quadrature: classical Gauss rules, multi-dimensional rules and an adaptive integrator.

pub mod adaptive;
pub mod gauss;
pub mod rules;

pub use adaptive::{integrate, integrate_interval, integrate_unit, AdaptiveOptions, Integral, UNIT_DEPTH};
pub use gauss::{gauss_hermite, gauss_legendre, Rule1d};
pub use rules::{
    centered_rule, gaussian_rule, gaussian_rule_with_budget, lebesgue_box_rule, CenteredOptions, Measure,
    QuadratureRule, DEFAULT_NODE_BUDGET,
};
