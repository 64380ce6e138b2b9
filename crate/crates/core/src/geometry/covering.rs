use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::local_radius;
use crate::sampling::{rng, uniform_ball, unit_vector, uniform};

/// A Euclidean ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, x: &[f64]) -> bool {
        dist2(&self.center, x) < self.radius * self.radius
    }

    /// Ball with the same centre and `factor` times the radius.
    pub fn dilate(&self, factor: f64) -> Ball {
        Ball {
            center: self.center.clone(),
            radius: self.radius * factor,
        }
    }

    /// `sup_B e^{-|x|^2} / inf_B e^{-|x|^2}`.
    pub fn gaussian_oscillation(&self) -> f64 {
        let c = norm(&self.center);
        let near = (c - self.radius).max(0.0);
        let far = c + self.radius;
        (far * far - near * near).exp()
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// A family of balls covering `B(0, R)` once dilated by 2 and joined with `B(0, 1)`.
///
/// Annulus `2^{k-1} ≤ |x| < 2^k` carries balls of radius `2^{-k-1}` centred on a
/// cubic lattice of spacing `4 · 2^{-k-1} / √d`, so every point of the annulus lies
/// within `2 · 2^{-k-1}` of a centre.
#[derive(Debug, Clone)]
pub struct CoveringFamily {
    dim: usize,
    region_radius: f64,
    balls: Vec<Ball>,
    overlap: usize,
    c_d: f64,
    oscillation: f64,
    index: BallIndex,
}

impl CoveringFamily {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn region_radius(&self) -> f64 {
        self.region_radius
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    /// Measured overlap bound `N`.
    pub fn overlap(&self) -> usize {
        self.overlap
    }

    /// Dilation taking each ball `B` to `B̃ = 2B`.
    pub fn cover_dilation(&self) -> f64 {
        2.0
    }

    /// `C_d` with `B_h(x) ⊆ C_d B` for `x ∈ B`.
    pub fn c_d(&self) -> f64 {
        self.c_d
    }

    /// `max_B sup_B e^{-|·|^2} / inf_B e^{-|·|^2}`.
    pub fn gaussian_oscillation(&self) -> f64 {
        self.oscillation
    }

    /// Indices of balls containing `x`.
    pub fn containing(&self, x: &[f64]) -> Vec<usize> {
        self.index.candidates(x).into_iter().filter(|&i| self.balls[i].contains(x)).collect()
    }

    /// A ball `B̂ ⊇ B_h(x)` from the family: `C_d B` for a ball `B ∋ x`, else
    /// `(C_d + 1) B` for a ball with `x ∈ 2B`, else `B(0, 1 + d)` when `|x| < 1`.
    pub fn hat_for(&self, x: &[f64]) -> Ball {
        if let Some(&i) = self.containing(x).first() {
            return self.balls[i].dilate(self.c_d);
        }
        if let Some(i) = self
            .index
            .candidates_within(x, 2.0)
            .into_iter()
            .find(|&i| self.balls[i].dilate(2.0).contains(x))
        {
            return self.balls[i].dilate(self.c_d + 1.0);
        }
        Ball {
            center: vec![0.0; self.dim],
            radius: 1.0 + self.dim as f64,
        }
    }

    /// Whether `x` lies in `B(0,1)` or in some `2B`.
    pub fn covers(&self, x: &[f64]) -> bool {
        if norm(x) < 1.0 {
            return true;
        }
        self.index
            .candidates_within(x, 2.0)
            .into_iter()
            .any(|i| self.balls[i].dilate(2.0).contains(x))
    }

    /// Number of uniformly sampled points of `B(0, R)` left uncovered.
    pub fn uncovered(&self, samples: usize, seed: u64) -> usize {
        let mut r = rng(seed);
        (0..samples)
            .filter(|_| {
                let x = uniform_ball(&mut r, self.dim, self.region_radius);
                !self.covers(&x)
            })
            .count()
    }

    /// Largest number of balls containing a sampled point.
    pub fn sampled_overlap(&self, samples: usize, seed: u64) -> usize {
        let mut r = rng(seed);
        (0..samples)
            .map(|_| {
                let x = uniform_ball(&mut r, self.dim, self.region_radius * 1.05 + 0.5);
                self.containing(&x).len()
            })
            .max()
            .unwrap_or(0)
    }

    /// Samples `(B, x ∈ B)` and counts failures of `B_h(x) ⊆ C_d B`.
    pub fn property_iv_violations(&self, samples: usize, seed: u64) -> usize {
        let mut r = rng(seed);
        let n = self.balls.len();
        (0..samples)
            .filter(|_| {
                let b = &self.balls[(uniform(&mut r, 0.0, n as f64) as usize).min(n - 1)];
                let off = uniform_ball(&mut r, self.dim, b.radius);
                let x: Vec<f64> = b.center.iter().zip(&off).map(|(c, o)| c + o).collect();
                dist2(&x, &b.center).sqrt() + local_radius(&x) > self.c_d * b.radius * (1.0 + 1e-12)
            })
            .count()
    }

    /// Largest sampled `e^{-|y|^2 + |x|^2}` over pairs inside one ball.
    pub fn sampled_oscillation(&self, samples: usize, seed: u64) -> f64 {
        let mut r = rng(seed);
        let n = self.balls.len();
        (0..samples)
            .map(|_| {
                let b = &self.balls[(uniform(&mut r, 0.0, n as f64) as usize).min(n - 1)];
                let u = unit_vector(&mut r, self.dim);
                let out = norm(&b.center);
                // The extremal points lie on the ray through the centre.
                let dir: Vec<f64> = if out > 0.0 {
                    b.center.iter().map(|c| c / out).collect()
                } else {
                    u
                };
                let s = uniform(&mut r, 0.9, 1.0) * b.radius;
                let far: Vec<f64> = b.center.iter().zip(&dir).map(|(c, d)| c + s * d).collect();
                let near: Vec<f64> = b.center.iter().zip(&dir).map(|(c, d)| c - s * d).collect();
                (dist2(&far, &vec![0.0; self.dim]) - dist2(&near, &vec![0.0; self.dim])).exp()
            })
            .fold(1.0, f64::max)
    }
}

/// Builds the annulus-lattice family for `B(0, R)` in dimension `d`.
pub fn build_covering(region_radius: f64, dim: usize) -> Result<CoveringFamily> {
    if !(region_radius > 0.0) || !region_radius.is_finite() {
        return Err(Error::InvalidArgument("covering radius must be positive".into()));
    }
    if dim == 0 || dim > 3 {
        return Err(Error::InvalidArgument(format!("covering supports dimensions 1 to 3, got {dim}")));
    }
    let mut balls = Vec::new();
    let mut k = 1i32;
    loop {
        let inner = 2f64.powi(k - 1);
        if inner >= region_radius {
            break;
        }
        let outer = 2f64.powi(k);
        let r = 2f64.powi(-k - 1);
        let spacing = 4.0 * r / (dim as f64).sqrt();
        let slack = spacing * (dim as f64).sqrt() / 2.0;
        let lo = inner - slack;
        let hi = outer + slack;
        let m = (hi / spacing).ceil() as i64;
        let mut idx = vec![-m; dim];
        'lattice: loop {
            let c: Vec<f64> = idx.iter().map(|&i| (i as f64 + 0.5) * spacing).collect();
            let nc = norm(&c);
            if nc >= lo && nc < hi {
                balls.push(Ball { center: c, radius: r });
            }
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot <= m {
                    continue 'lattice;
                }
                *slot = -m;
            }
            break;
        }
        k += 1;
    }
    let c_d = balls
        .iter()
        .map(|b| {
            let near = norm(&b.center) - b.radius;
            let m = if near > 1.0 { 1.0 / near } else { 1.0 };
            1.0 + dim as f64 * m / b.radius
        })
        .fold(1.0, f64::max);
    let oscillation = balls.iter().map(Ball::gaussian_oscillation).fold(1.0, f64::max);
    let index = BallIndex::new(&balls);
    let mut family = CoveringFamily {
        dim,
        region_radius,
        balls,
        overlap: 0,
        c_d,
        oscillation,
        index,
    };
    let mut overlap = family.sampled_overlap(10_000, 0x5eed);
    for b in &family.balls {
        overlap = overlap.max(family.containing(&b.center).len());
    }
    family.overlap = overlap;
    Ok(family)
}

/// Uniform hash grid over ball bounding boxes.
#[derive(Debug, Clone)]
struct BallIndex {
    cell: f64,
    cells: HashMap<Vec<i64>, Vec<usize>>,
    max_radius: f64,
}

impl BallIndex {
    fn new(balls: &[Ball]) -> Self {
        let max_radius = balls.iter().map(|b| b.radius).fold(0.0, f64::max);
        let cell = (2.0 * max_radius).max(1e-9);
        let mut cells: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, b) in balls.iter().enumerate() {
            let key: Vec<i64> = b.center.iter().map(|c| (c / cell).floor() as i64).collect();
            cells.entry(key).or_default().push(i);
        }
        Self { cell, cells, max_radius }
    }

    fn candidates(&self, x: &[f64]) -> Vec<usize> {
        self.candidates_within(x, 1.0)
    }

    /// Balls whose `factor`-dilate could contain `x`.
    fn candidates_within(&self, x: &[f64], factor: f64) -> Vec<usize> {
        let reach = ((factor * self.max_radius) / self.cell).ceil() as i64;
        let base: Vec<i64> = x.iter().map(|c| (c / self.cell).floor() as i64).collect();
        let mut out = Vec::new();
        let mut off = vec![-reach; x.len()];
        loop {
            let key: Vec<i64> = base.iter().zip(&off).map(|(b, o)| b + o).collect();
            if let Some(v) = self.cells.get(&key) {
                out.extend_from_slice(v);
            }
            let mut carried = true;
            for slot in off.iter_mut().rev() {
                *slot += 1;
                if *slot <= reach {
                    carried = false;
                    break;
                }
                *slot = -reach;
            }
            if carried {
                break;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_region_family() {
        let f = build_covering(1.0, 2).unwrap();
        assert!(f.balls().iter().all(|b| norm(&b.center) < 2.5));
        assert_eq!(f.uncovered(10_000, 1), 0);
        assert!(f.overlap() <= 4);
    }

    #[test]
    fn properties_hold_in_each_dimension() {
        for (d, r) in [(1usize, 20.0), (2, 5.0), (3, 2.0)] {
            let f = build_covering(r, d).unwrap();
            assert_eq!(f.uncovered(10_000, 2), 0, "d={d}");
            assert_eq!(f.property_iv_violations(1_000, 3), 0, "d={d}");
            assert!(f.sampled_oscillation(1_000, 4) <= f.gaussian_oscillation() * (1.0 + 1e-9));
            assert!(f.gaussian_oscillation() <= 2.5f64.exp(), "d={d}: {}", f.gaussian_oscillation());
            assert!(f.sampled_overlap(5_000, 5) <= f.overlap());
            assert!(f.c_d() <= 1.0 + 8.0 * d as f64);
            let mut rng = crate::sampling::rng(6);
            for _ in 0..500 {
                let x = uniform_ball(&mut rng, d, r);
                let hat = f.hat_for(&x);
                assert!(dist2(&x, &hat.center).sqrt() + local_radius(&x) <= hat.radius * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_covering(0.0, 2).is_err());
        assert!(build_covering(1.0, 4).is_err());
    }
}
