use crate::error::{Error, Result};

/// Samples of a function on the uniform grid `origin + h · i`, `0 ≤ i_k < n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    origin: Vec<f64>,
    h: f64,
    n: usize,
    values: Vec<f64>,
}

impl GridFunction {
    /// Samples `f` on `n^d` nodes filling the cube of half-width `half_width` about `center`.
    pub fn sample<F: Fn(&[f64]) -> f64>(f: F, center: &[f64], half_width: f64, n: usize) -> Result<Self> {
        if n < 2 || !(half_width > 0.0) || center.is_empty() {
            return Err(Error::InvalidArgument("grid needs n >= 2 and positive half-width".into()));
        }
        let dim = center.len();
        let h = 2.0 * half_width / (n - 1) as f64;
        let origin: Vec<f64> = center.iter().map(|c| c - half_width).collect();
        let total = n.checked_pow(dim as u32).ok_or(Error::NodeBudget {
            requested: usize::MAX,
            budget: crate::quadrature::DEFAULT_NODE_BUDGET,
        })?;
        if total > crate::quadrature::DEFAULT_NODE_BUDGET * 16 {
            return Err(Error::NodeBudget {
                requested: total,
                budget: crate::quadrature::DEFAULT_NODE_BUDGET * 16,
            });
        }
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        let mut p = vec![0.0; dim];
        for _ in 0..total {
            for k in 0..dim {
                p[k] = origin[k] + h * idx[k] as f64;
            }
            values.push(f(&p));
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < n {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(Self { origin, h, n, values })
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.n
    }

    pub fn node(&self, flat: usize) -> Vec<f64> {
        let mut rem = flat;
        let mut out = vec![0.0; self.dim()];
        for k in (0..self.dim()).rev() {
            out[k] = self.origin[k] + self.h * (rem % self.n) as f64;
            rem /= self.n;
        }
        out
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn contains(&self, x: &[f64]) -> bool {
        let top = self.h * (self.n - 1) as f64;
        x.iter().zip(&self.origin).all(|(v, o)| *v >= o - 1e-12 && *v <= o + top + 1e-12)
    }

    /// `(Σ |f|, count)` over nodes `y` with `|y - x| ≤ r`.
    fn ball_sum(&self, x: &[f64], r: f64) -> (f64, usize) {
        let dim = self.dim();
        let lo: Vec<usize> = (0..dim)
            .map(|k| (((x[k] - r - self.origin[k]) / self.h).ceil().max(0.0)) as usize)
            .collect();
        let hi: Vec<usize> = (0..dim)
            .map(|k| {
                let v = ((x[k] + r - self.origin[k]) / self.h).floor();
                if v < 0.0 {
                    0
                } else {
                    (v as usize).min(self.n - 1)
                }
            })
            .collect();
        if (0..dim).any(|k| lo[k] > hi[k]) {
            return (0.0, 0);
        }
        let r2 = r * r * (1.0 + 1e-12);
        let mut idx = lo.clone();
        let mut sum = 0.0;
        let mut count = 0;
        loop {
            let mut d2 = 0.0;
            let mut flat = 0usize;
            for k in 0..dim {
                let y = self.origin[k] + self.h * idx[k] as f64;
                d2 += (y - x[k]) * (y - x[k]);
                flat = flat * self.n + idx[k];
            }
            if d2 <= r2 {
                sum += self.values[flat].abs();
                count += 1;
            }
            let mut k = dim;
            loop {
                if k == 0 {
                    return (sum, count);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] <= hi[k] {
                    break;
                }
                idx[k] = lo[k];
            }
        }
    }
}

/// Radii `h, 2h, 4h, …` up to and including the first one `≥ top`.
pub fn dyadic_radii(h: f64, top: f64) -> Vec<f64> {
    let mut out = vec![h];
    while *out.last().unwrap() < top {
        let next = out.last().unwrap() * 2.0;
        out.push(next);
    }
    out
}

/// Discrete Hardy–Littlewood maximal function: the largest average of `|f|` over the
/// grid nodes in `B(x, r)`, `r ∈ radii`. Balls without nodes are skipped.
pub fn maximal_function(f: &GridFunction, x: &[f64], radii: &[f64]) -> Result<f64> {
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: x.len(),
        });
    }
    if !f.contains(x) {
        return Err(Error::InvalidArgument("maximal function point lies outside the grid".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidArgument("radii must be positive".into()));
    }
    let mut best: Option<f64> = None;
    for &r in radii {
        let (s, c) = f.ball_sum(x, r);
        if c > 0 {
            let avg = s / c as f64;
            best = Some(best.map_or(avg, |b: f64| b.max(avg)));
        }
    }
    best.ok_or_else(|| Error::Degenerate("every ball is empty of grid nodes".into()))
}
