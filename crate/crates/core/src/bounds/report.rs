use serde::{Deserialize, Serialize};

/// Summary of a sampled inequality `lhs ≤ C · rhs`.
///
/// `violations` counts samples with `lhs > rhs + tolerance` (meaningful when the
/// inequality is claimed with `C = 1`) together with samples whose ratio is not finite.
/// `empirical_constant` is `sup lhs/rhs` over all samples and `half_constant` the same
/// sup over the first half; `stability = empirical_constant / half_constant`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub check: String,
    pub dim: usize,
    pub beta: Option<f64>,
    pub region: Option<String>,
    pub samples: usize,
    pub violations: usize,
    /// `max (lhs - rhs) / max(|rhs|, tiny)`; negative when every sample satisfies `lhs ≤ rhs`.
    pub worst_margin: f64,
    pub empirical_constant: f64,
    pub half_constant: f64,
    pub stability: f64,
    pub tolerance: f64,
}

impl BoundReport {
    /// `true` when the half-sample and full-sample constants differ by at most `factor`.
    pub fn is_stable(&self, factor: f64) -> bool {
        self.empirical_constant.is_finite() && self.stability.is_finite() && self.stability <= factor
    }

    pub fn clean(&self) -> bool {
        self.violations == 0
    }
}

/// Order-sensitive accumulator behind every [`BoundReport`].
#[derive(Debug, Clone)]
pub struct RatioAccumulator {
    check: String,
    dim: usize,
    beta: Option<f64>,
    region: Option<String>,
    tolerance: f64,
    pairs: Vec<(f64, f64)>,
}

impl RatioAccumulator {
    pub fn new(check: &str, dim: usize, tolerance: f64) -> Self {
        Self {
            check: check.to_string(),
            dim,
            beta: None,
            region: None,
            tolerance,
            pairs: Vec::new(),
        }
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn region(mut self, region: &str) -> Self {
        self.region = Some(region.to_string());
        self
    }

    pub fn push(&mut self, lhs: f64, rhs: f64) {
        self.pairs.push((lhs, rhs));
    }

    pub fn extend<I: IntoIterator<Item = (f64, f64)>>(&mut self, it: I) {
        self.pairs.extend(it);
    }

    pub fn finish(self) -> BoundReport {
        let n = self.pairs.len();
        let half = n.div_ceil(2);
        let ratio = |(l, r): (f64, f64)| {
            if l == 0.0 {
                0.0
            } else if r > 0.0 {
                l / r
            } else {
                f64::INFINITY
            }
        };
        let mut violations = 0;
        let mut worst = f64::NEG_INFINITY;
        let mut sup = 0.0f64;
        let mut half_sup = 0.0f64;
        for (i, &(l, r)) in self.pairs.iter().enumerate() {
            let q = ratio((l, r));
            if !q.is_finite() || !l.is_finite() || l > r + self.tolerance {
                violations += 1;
            }
            let m = (l - r) / r.abs().max(f64::MIN_POSITIVE);
            worst = if m.is_nan() { f64::INFINITY } else { worst.max(m) };
            sup = if q.is_nan() { f64::INFINITY } else { sup.max(q) };
            if i < half {
                half_sup = sup;
            }
        }
        let stability = if sup == 0.0 {
            1.0
        } else if half_sup > 0.0 {
            sup / half_sup
        } else {
            f64::INFINITY
        };
        BoundReport {
            check: self.check,
            dim: self.dim,
            beta: self.beta,
            region: self.region,
            samples: n,
            violations,
            worst_margin: if n == 0 { 0.0 } else { worst },
            empirical_constant: sup,
            half_constant: half_sup,
            stability,
            tolerance: self.tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulates_in_order() {
        let mut acc = RatioAccumulator::new("t", 1, 0.0).beta(2.0);
        acc.extend([(1.0, 2.0), (1.0, 4.0), (3.0, 2.0), (0.0, 1.0)]);
        let r = acc.finish();
        assert_eq!(r.samples, 4);
        assert_eq!(r.violations, 1);
        assert_eq!(r.half_constant, 0.5);
        assert_eq!(r.empirical_constant, 1.5);
        assert_eq!(r.stability, 3.0);
        assert!(!r.is_stable(1.5));
        assert!((r.worst_margin - 0.5).abs() < 1e-15);
    }

    #[test]
    fn empty_report() {
        let r = RatioAccumulator::new("t", 2, 1e-9).finish();
        assert_eq!(r.samples, 0);
        assert_eq!(r.empirical_constant, 0.0);
        assert!(r.is_stable(1.5));
        assert!(r.clean());
    }
}
