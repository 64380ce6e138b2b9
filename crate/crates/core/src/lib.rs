//! Gaussian harmonic analysis in a handful of dimensions.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod hermite;
pub mod quadrature;
pub mod riesz;
pub mod sampling;
pub mod scalar;
pub mod semigroup;
pub mod varlp;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision aliases for the generic types.
pub type Expansion = hermite::HermiteExpansion<f64>;
pub type Rule = quadrature::QuadratureRule<f64>;
pub type Order = riesz::RieszOrder<f64>;
pub type Kernel = riesz::KernelQuadrature<f64>;

/// Single-precision aliases.
pub type Expansion32 = hermite::HermiteExpansion<f32>;
pub type Rule32 = quadrature::QuadratureRule<f32>;
pub type Order32 = riesz::RieszOrder<f32>;
pub type Kernel32 = riesz::KernelQuadrature<f32>;
