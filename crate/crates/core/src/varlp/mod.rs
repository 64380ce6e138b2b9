//! Variable-exponent Lebesgue spaces `L^{p(·)}(γ_d)`.

mod diagnostics;
mod exponent;
mod norm;

pub use diagnostics::{bounds_hold, lh0_constant, pinfty_gamma_check, PinftyReport};
pub use exponent::{ClassTags, ExponentField, Profile};
pub use norm::{holder_check, luxemburg_norm, modular, ModularTable, DEFAULT_BISECTION_TOL};
