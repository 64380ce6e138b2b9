//! Single-pair diagnostic dump behind `griesz kernel-probe`.

use gauss_riesz::bounds::{aux_kernels, decompose, global_rhs, kernel_geometry, Domination, KernelGeometry, Region};
use gauss_riesz::geometry::{admissibility_radius, in_local_region};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Tabular;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelProbe {
    pub dim: usize,
    pub beta: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub kernel: f64,
    pub kernel_error: f64,
    pub term_i: f64,
    pub term_ii: f64,
    pub term_iii: f64,
    /// `I + II + III`.
    pub terms: f64,
    /// `(I + 2 II + III) / (π^{d/2} Γ(β/2 + 1))`.
    pub derived_bound: f64,
    pub geometry: KernelGeometry<f64>,
    pub admissibility_radius: f64,
    pub local: bool,
    /// Global piece containing the pair, if any.
    pub region: Option<Region>,
    /// `𝒦_2 + 𝒦_3` at local pairs, the region right-hand side with the default `eps` otherwise.
    pub region_rhs: Option<f64>,
}

/// Evaluates the kernel, its three dominating terms and the pair geometry at `(x, y)`.
pub fn kernel_probe(x: &[f64], y: &[f64], beta: f64) -> Result<KernelProbe> {
    let dim = x.len();
    if !(1..=3).contains(&dim) || y.len() != dim {
        return Err(Error::Config(format!(
            "x and y need the same dimension 1, 2 or 3, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Config(format!("beta must be positive, got {beta}")));
    }
    if x == y {
        return Err(Error::Config("x and y coincide".into()));
    }
    let geometry = kernel_geometry(x, y)?;
    let d = decompose(beta, x, y)?;
    let local = in_local_region(x, y);
    let region = Region::classify(x, y);
    let region_rhs = match region {
        Some(r) => {
            let eps = gauss_riesz::bounds::default_eps(dim, beta, Some(2.0));
            Some(global_rhs(r, x, y, eps)?)
        }
        None if local => aux_kernels(x, y, beta).ok().map(|a| a.k2 + a.k3),
        None => None,
    };
    Ok(KernelProbe {
        dim,
        beta,
        x: x.to_vec(),
        y: y.to_vec(),
        kernel: d.kernel,
        kernel_error: d.kernel_error,
        term_i: d.term_i,
        term_ii: d.term_ii,
        term_iii: d.term_iii,
        terms: d.terms(),
        derived_bound: Domination::Derived.rhs(dim, beta, &d).0,
        geometry,
        admissibility_radius: admissibility_radius(x),
        local,
        region,
        region_rhs,
    })
}

fn join(v: &[f64]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

impl Tabular for KernelProbe {
    fn header(&self) -> Vec<&'static str> {
        vec!["quantity", "value"]
    }

    fn records(&self) -> Vec<Vec<String>> {
        let num = |v: f64| crate::report::sig12(v).to_string();
        let g = &self.geometry;
        let mut rows = vec![
            ("kernel", num(self.kernel)),
            ("kernel_error", num(self.kernel_error)),
            ("term_i", num(self.term_i)),
            ("term_ii", num(self.term_ii)),
            ("term_iii", num(self.term_iii)),
            ("terms", num(self.terms)),
            ("derived_bound", num(self.derived_bound)),
            ("a", num(g.a)),
            ("b", num(g.b)),
            ("t0", num(g.t0)),
            ("u_t0", num(g.u_t0)),
            ("admissibility_radius", num(self.admissibility_radius)),
            ("local", self.local.to_string()),
            ("region", self.region.map(|r| r.name().to_string()).unwrap_or_default()),
        ];
        if let Some(r) = self.region_rhs {
            rows.push(("region_rhs", num(r)));
        }
        rows.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect()
    }

    fn trailer(&self) -> Vec<(String, String)> {
        vec![
            ("dim".into(), self.dim.to_string()),
            ("beta".into(), self.beta.to_string()),
            ("x".into(), join(&self.x)),
            ("y".into(), join(&self.y)),
        ]
    }
}
