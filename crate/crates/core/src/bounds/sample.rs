//! Seeded pair samplers shared by the bound checks.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::local_radius;
use crate::sampling::{log_radial, log_uniform, standard_normal, unit_vector};
use crate::scalar::{dist, dot, norm};

/// Pairs closer than this are never sampled.
pub const DIAGONAL_EXCLUSION: f64 = 1e-3;

/// Largest `|x|` drawn by [`sample_point`].
pub const POINT_RADIUS: f64 = 5.0;

/// Largest `|y|` accepted by the global samplers.
pub const PARTNER_RADIUS: f64 = 6.0;

/// `2·N(0, I)` conditioned on `|x| ≤ 5`.
pub fn sample_point<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = standard_normal(rng, dim).into_iter().map(|v| 2.0 * v).collect();
        if norm(&x) <= POINT_RADIUS {
            return x;
        }
    }
}

/// The three pieces of the global region `|x - y| ≥ d·min(1, 1/|x|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `⟨x, y⟩ ≤ 0`.
    BNonpos,
    /// `⟨x, y⟩ > 0` and `|x| ≤ 1` or `|x - y| ≤ 1`.
    BPosNear,
    /// `⟨x, y⟩ > 0`, `|x| > 1` and `|x - y| > 1`.
    BPosFar,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::BNonpos, Region::BPosNear, Region::BPosFar];

    pub fn name(self) -> &'static str {
        match self {
            Region::BNonpos => "b_nonpos",
            Region::BPosNear => "b_pos_near",
            Region::BPosFar => "b_pos_far",
        }
    }

    /// Which piece of the global region `(x, y)` falls in, if any.
    pub fn classify(x: &[f64], y: &[f64]) -> Option<Region> {
        let r = dist(x, y);
        if r < local_radius(x) || r < DIAGONAL_EXCLUSION {
            return None;
        }
        if dot(x, y) <= 0.0 {
            Some(Region::BNonpos)
        } else if norm(x) <= 1.0 || r <= 1.0 {
            Some(Region::BPosNear)
        } else {
            Some(Region::BPosFar)
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Region {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Region::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| crate::Error::InvalidArgument(format!("unknown region `{s}`")))
    }
}

fn partner<R: Rng>(rng: &mut R, x: &[f64]) -> Vec<f64> {
    if rng.random::<bool>() {
        sample_point(rng, x.len())
    } else {
        let h = log_radial(rng, x.len(), 0.05, PARTNER_RADIUS);
        x.iter().zip(&h).map(|(a, b)| a + b).collect()
    }
}

/// A pair in `region`, by rejection from [`sample_point`] and a mixed partner proposal.
pub fn global_pair<R: Rng>(rng: &mut R, dim: usize, region: Region) -> (Vec<f64>, Vec<f64>) {
    loop {
        let x = sample_point(rng, dim);
        for _ in 0..8 {
            let y = partner(rng, &x);
            if norm(&y) <= PARTNER_RADIUS && Region::classify(&x, &y) == Some(region) {
                return (x, y);
            }
        }
    }
}

/// A global pair with `⟨x, y⟩ > 0`.
pub fn global_pair_b_pos<R: Rng>(rng: &mut R, dim: usize) -> (Vec<f64>, Vec<f64>) {
    loop {
        let x = sample_point(rng, dim);
        let y = partner(rng, &x);
        if norm(&y) <= PARTNER_RADIUS && matches!(Region::classify(&x, &y), Some(Region::BPosNear | Region::BPosFar)) {
            return (x, y);
        }
    }
}

/// A pair with `10^{-3} ≤ |x - y| < d·min(1, 1/|x|)`, the distance log-uniform.
pub fn local_pair<R: Rng>(rng: &mut R, dim: usize) -> (Vec<f64>, Vec<f64>) {
    let x = sample_point(rng, dim);
    let top = local_radius(&x);
    let r = log_uniform(rng, DIAGONAL_EXCLUSION, top) * (1.0 - 1e-12);
    let y = x.iter().zip(unit_vector(rng, dim)).map(|(a, b)| a + r * b).collect();
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng;

    #[test]
    fn samplers_respect_regions() {
        let mut r = rng(2);
        for d in 1..=3 {
            for region in Region::ALL {
                for _ in 0..50 {
                    let (x, y) = global_pair(&mut r, d, region);
                    assert_eq!(Region::classify(&x, &y), Some(region));
                    assert!(norm(&x) <= POINT_RADIUS);
                }
            }
            for _ in 0..50 {
                let (x, y) = local_pair(&mut r, d);
                assert!(Region::classify(&x, &y).is_none());
                assert!(dist(&x, &y) >= DIAGONAL_EXCLUSION * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn boundary_goes_to_near() {
        assert_eq!(Region::classify(&[1.0], &[2.0]), Some(Region::BPosNear));
        assert_eq!(Region::classify(&[2.0], &[3.0]), Some(Region::BPosNear));
        assert_eq!(Region::classify(&[2.0], &[3.5]), Some(Region::BPosFar));
        assert_eq!(Region::classify(&[2.0], &[-1.0]), Some(Region::BNonpos));
        assert_eq!(Region::classify(&[2.0], &[2.1]), None);
        assert_eq!("b_pos_far".parse::<Region>().unwrap(), Region::BPosFar);
    }
}
