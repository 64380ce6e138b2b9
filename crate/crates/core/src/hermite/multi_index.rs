use std::fmt;

use serde::{Deserialize, Serialize};

/// A multi-index `ν = (ν_1, …, ν_d)` of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// `ν` with a single non-zero entry `k` on `axis`.
    pub fn axis(dim: usize, axis: usize, k: u32) -> Self {
        let mut v = vec![0; dim];
        v[axis] = k;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|ν| = Σ ν_i`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// Every multi-index in `dim` variables with `|ν| ≤ max_order`, in graded lexicographic order.
    pub fn up_to_order(dim: usize, max_order: u32) -> Vec<MultiIndex> {
        (0..=max_order).flat_map(|n| Self::of_order(dim, n)).collect()
    }

    /// Every multi-index in `dim` variables with `|ν| = order`.
    pub fn of_order(dim: usize, order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; dim];
        fill(&mut cur, 0, order, &mut out);
        out
    }
}

fn fill(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if cur.is_empty() {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for k in (0..=remaining).rev() {
        cur[pos] = k;
        fill(cur, pos + 1, remaining - k, out);
    }
    cur[pos] = 0;
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}
