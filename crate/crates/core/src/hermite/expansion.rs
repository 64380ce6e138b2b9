use std::collections::BTreeMap;

use crate::error::{check_dim, Result};
use crate::hermite::{hermite_table, project, MultiIndex};
use crate::quadrature::QuadratureRule;
use crate::scalar::Scalar;

/// A finite Hermite series `Σ c_ν H_ν` in `dim` variables.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion<S> {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> HermiteExpansion<S> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, S)>>(dim: usize, terms: I) -> Result<Self> {
        let mut e = Self::new(dim);
        for (nu, c) in terms {
            e.add_term(nu, c)?;
        }
        Ok(e)
    }

    /// Hermite coefficients of `f` up to total degree `max_order`.
    pub fn project_function<F: Fn(&[S]) -> S>(f: F, max_order: u32, rule: &QuadratureRule<S>) -> Result<Self> {
        let mut e = Self::new(rule.dim());
        for nu in MultiIndex::up_to_order(rule.dim(), max_order) {
            let c = project(&f, &nu, rule)?;
            e.add_term(nu, c)?;
        }
        Ok(e)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, nu: &MultiIndex) -> S {
        self.coeffs.get(nu).copied().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, S)> + '_ {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    /// Adds `c` to the coefficient of `nu`, dropping it if the sum is zero.
    pub fn add_term(&mut self, nu: MultiIndex, c: S) -> Result<()> {
        check_dim(self.dim, nu.dim())?;
        let sum = self.get(&nu) + c;
        if sum == S::zero() {
            self.coeffs.remove(&nu);
        } else {
            self.coeffs.insert(nu, sum);
        }
        Ok(())
    }

    /// Largest `|ν|` with a non-zero coefficient.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    /// Applies `c_ν ↦ m(ν) c_ν`, dropping terms that become zero.
    pub fn map_coefficients<M: FnMut(&MultiIndex, S) -> S>(&self, mut m: M) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, &v)| (k.clone(), m(k, v)))
            .filter(|(_, v)| *v != S::zero())
            .collect();
        Self { dim: self.dim, coeffs }
    }

    pub fn scaled(&self, s: S) -> Self {
        self.map_coefficients(|_, c| c * s)
    }

    /// `Σ c_ν^2 ‖H_ν‖^2 = ‖f‖^2_{L^2(γ_d)}`.
    pub fn l2_norm_sq(&self) -> S {
        self.iter()
            .fold(S::zero(), |acc, (nu, c)| acc + c * c * crate::hermite::hermite_norm_sq::<S>(nu))
    }

    /// Evaluates the series at `x`.
    pub fn eval(&self, x: &[S]) -> Result<S> {
        check_dim(self.dim, x.len())?;
        if self.coeffs.is_empty() {
            return Ok(S::zero());
        }
        let mut max_per_axis = vec![0u32; self.dim];
        for nu in self.coeffs.keys() {
            for (m, &k) in max_per_axis.iter_mut().zip(nu.entries()) {
                *m = (*m).max(k);
            }
        }
        let tables: Vec<Vec<S>> = max_per_axis
            .iter()
            .zip(x)
            .map(|(&n, &xi)| hermite_table(n, xi))
            .collect();
        Ok(self.coeffs.iter().fold(S::zero(), |acc, (nu, &c)| {
            let h = nu
                .entries()
                .iter()
                .zip(&tables)
                .fold(S::one(), |p, (&k, t)| p * t[k as usize]);
            acc + c * h
        }))
    }
}

/// `Σ_ν e_ν H_ν(x)`.
pub fn expansion_eval<S: Scalar>(e: &HermiteExpansion<S>, x: &[S]) -> Result<S> {
    e.eval(x)
}
