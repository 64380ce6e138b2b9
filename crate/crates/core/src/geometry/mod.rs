//! Admissible (hyperbolic) balls, an admissible covering and a discrete maximal function.

mod covering;
mod maximal;

pub use covering::{build_covering, Ball, CoveringFamily};
pub use maximal::{dyadic_radii, maximal_function, GridFunction};

use crate::bounds::{BoundReport, RatioAccumulator};
use crate::error::Result;
use crate::quadrature::{centered_rule, CenteredOptions};
use crate::sampling::{rng, uniform, uniform_ball};
use crate::scalar::{dist, norm, Scalar};

/// `m(x) = min(1, 1/|x|)`.
pub fn admissibility_radius<S: Scalar>(x: &[S]) -> S {
    let r = norm(x);
    if r <= S::one() {
        S::one()
    } else {
        r.recip()
    }
}

/// Radius `d · m(x)` of the admissible ball `B_h(x)`.
pub fn local_radius<S: Scalar>(x: &[S]) -> S {
    S::of_usize(x.len()) * admissibility_radius(x)
}

/// `|x - y| < d · m(x)`.
pub fn in_local_region<S: Scalar>(x: &[S], y: &[S]) -> bool {
    dist(x, y) < local_radius(x)
}

/// Sampled check of the local-part domination
/// `(1 + |x|) ∫_{B_h(x)} |f(y)| / |x - y|^{d-1} dy ≤ C 𝓜(f χ_{B̂})(x)`,
/// with `B̂` from [`CoveringFamily::hat_for`].
///
/// Each `f` is a non-negative pair of Gaussian bumps centred in `B_h(x)`; `x` is uniform in `B(0, 3.5)`.
/// Bump widths stay above 2.5 grid spacings so the discrete maximal function resolves them.
pub fn local_domination_check(dim: usize, samples: usize, seed: u64) -> Result<BoundReport> {
    let family = build_covering(3.5, dim)?;
    let grid_n = match dim {
        1 => 201,
        2 => 61,
        _ => 41,
    };
    let mut r = rng(seed);
    let mut acc = RatioAccumulator::new("local-domination", dim, 0.0).region("local");
    for _ in 0..samples {
        let x = uniform_ball(&mut r, dim, 3.5);
        let m = admissibility_radius(&x);
        let rad = dim as f64 * m;
        let min_width = (10.0 / (grid_n - 1) as f64).max(0.05);
        let bumps: Vec<(Vec<f64>, f64, f64)> = (0..2)
            .map(|_| {
                let off = uniform_ball(&mut r, dim, 0.8 * rad);
                let c: Vec<f64> = x.iter().zip(&off).map(|(a, b)| a + b).collect();
                (c, uniform(&mut r, min_width, 1.0) * rad, uniform(&mut r, 0.1, 1.0))
            })
            .collect();
        let f = move |y: &[f64]| -> f64 {
            bumps
                .iter()
                .map(|(c, w, a)| {
                    let d2: f64 = y.iter().zip(c).map(|(p, q)| (p - q) * (p - q)).sum();
                    a * (-d2 / (w * w)).exp()
                })
                .sum()
        };
        let hat = family.hat_for(&x);
        let rule = centered_rule(
            &x,
            rad,
            &CenteredOptions {
                inner_radius: 0.5 * rad,
                panel_width: 0.25 * rad,
                ..CenteredOptions::default()
            },
        )?;
        let integral = rule.integrate(|y| {
            let d = y.iter().zip(&x).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
            f(y) / d.powi(dim as i32 - 1)
        });
        let lhs = (1.0 + crate::scalar::norm(&x)) * integral;
        let grid = GridFunction::sample(|y| if hat.contains(y) { f(y) } else { 0.0 }, &x, 2.0 * rad, grid_n)?;
        let radii = dyadic_radii(grid.spacing(), 2.0 * rad);
        let rhs = maximal_function(&grid, &x, &radii)?;
        acc.push(lhs, rhs);
    }
    Ok(acc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_examples() {
        assert_eq!(admissibility_radius(&[0.0f64]), 1.0);
        assert_eq!(admissibility_radius(&[2.0f64]), 0.5);
        assert_eq!(admissibility_radius(&[0.5f64]), 1.0);
        assert_eq!(local_radius(&[3.0f64, 4.0]), 0.4);
    }

    #[test]
    fn local_region_examples() {
        assert!(in_local_region(&[1.0f64, 2.0], &[1.0, 2.0]));
        assert!(in_local_region(&[0.0f64], &[0.9]));
        assert!(!in_local_region(&[10.0f64], &[10.2]));
        assert!(!in_local_region(&[0.0f64], &[1.0]));
    }

    #[test]
    fn local_domination_constant_is_stable() {
        for d in 1..=2 {
            let r = local_domination_check(d, 200, 11).unwrap();
            assert!(r.empirical_constant.is_finite() && r.empirical_constant > 0.0, "{r:?}");
            assert!(r.is_stable(1.5), "d={d}: {r:?}");
        }
    }
}
