//! Classical Gauss rules computed by Newton iteration on the three-term recurrences.
//!
//! Nodes are computed in `f64` and returned in ascending order.

use std::f64::consts::PI;

/// A one-dimensional rule as parallel node and weight vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Affine map of a rule on `[-1, 1]` to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Rule1d {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule1d {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }
}

/// Gauss–Legendre rule with `n` nodes on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Rule1d {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule1d { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Hermite rule with `n` nodes for the weight `e^{-x^2}` on the real line.
///
/// The weights sum to `√π`.
pub fn gauss_hermite(n: usize) -> Rule1d {
    assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[n - 1],
            3 => 1.91 * z - 0.91 * nodes[n - 2],
            _ => 2.0 * z - nodes[n + 1 - i],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let (p, d) = orthonormal_hermite_with_derivative(n, z, pim4);
            pp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = orthonormal_hermite_with_derivative(n, z, pim4);
        if d != 0.0 {
            pp = d;
        }
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        let w = 2.0 / (pp * pp);
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule1d { nodes, weights }
}

/// Orthonormal Hermite function value and derivative at `x` (Numerical Recipes recurrence).
fn orthonormal_hermite_with_derivative(n: usize, x: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = x * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
    }
    let pp = (2.0 * n as f64).sqrt() * p2;
    (p1, pp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for n in 1..=24 {
            let rule = gauss_legendre(n);
            for k in 0..(2 * n) {
                let approx: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&x, &w)| w * x.powi(k as i32))
                    .sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "n={n} k={k}: {approx} vs {exact}");
            }
        }
    }

    #[test]
    fn hermite_moments() {
        // ∫ x^{2k} e^{-x^2} dx = Γ(k + 1/2)
        for n in [1usize, 2, 5, 10, 20, 40, 80] {
            let rule = gauss_hermite(n);
            for k in 0..n {
                let approx: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&x, &w)| w * x.powi(2 * k as i32))
                    .sum();
                let exact = statrs::function::gamma::gamma(k as f64 + 0.5);
                assert_relative_eq!(approx, exact, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn hermite_nodes_sorted_and_symmetric() {
        let rule = gauss_hermite(31);
        for w in rule.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..31 {
            assert_relative_eq!(rule.nodes[i], -rule.nodes[30 - i], epsilon = 1e-14);
        }
    }

    #[test]
    fn mapped_rule_integrates_on_interval() {
        let rule = gauss_legendre(6).mapped(1.0, 3.0);
        let v: f64 = rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| w * x * x).sum();
        assert_relative_eq!(v, 26.0 / 3.0, epsilon = 1e-13);
    }
}
