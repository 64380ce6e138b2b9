//! Empirical boundedness of `I_β` on `L^{p(·)}(γ_d)`: norm ratios over seeded test functions.

use std::time::Instant;

use gauss_riesz::quadrature::{gaussian_rule, AdaptiveOptions};
use gauss_riesz::riesz::RieszOrder;
use gauss_riesz::sampling::substream;
use gauss_riesz::varlp::{ExponentField, ModularTable, Profile};
use gauss_riesz::Rule;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::families::{node_extent, FamilyOptions, TestFunction};
use crate::report::{RatioReport, RatioRow, Timing};

/// Test functions with `I_β f` tabulated on a Gaussian rule, shared by every exponent.
#[derive(Debug, Clone)]
pub struct TheoremData {
    pub dim: usize,
    pub beta: f64,
    pub functions: Vec<TestFunction>,
    rule: Rule,
    weights: Vec<f64>,
    values: Vec<std::result::Result<Vec<f64>, String>>,
    setup_seconds: f64,
}

impl TheoremData {
    /// Draws `config.samples` functions from the seeded families and tabulates `I_β f`.
    pub fn prepare(config: &ExperimentConfig) -> Result<Self> {
        let opts = FamilyOptions {
            hermite_degree: config.budget.hermite_degree,
            ..FamilyOptions::default()
        };
        let mut rng = substream(config.seed, "theorem-functions");
        let functions = (0..config.samples)
            .map(|k| TestFunction::draw(&mut rng, k, config.dim, &opts))
            .collect();
        Self::with_functions(config, functions)
    }

    pub fn with_functions(config: &ExperimentConfig, functions: Vec<TestFunction>) -> Result<Self> {
        config.validate()?;
        let start = Instant::now();
        let order = RieszOrder::new(config.beta)?;
        let rule: Rule = gaussian_rule(config.budget.norm_points(config.dim), config.dim)?;
        let weights = rule.weights().to_vec();
        let opts = AdaptiveOptions {
            abs_tol: 1e-10,
            rel_tol: config.tolerances.riesz,
            max_panels: config.budget.max_panels,
        };
        let nodes: Vec<&[f64]> = rule.iter().map(|(x, _)| x).collect();
        let values = functions
            .par_iter()
            .map(|f: &TestFunction| {
                nodes
                    .iter()
                    .map(|x| f.riesz(order, x, &opts))
                    .collect::<gauss_riesz::Result<Vec<f64>>>()
                    .map_err(|e| e.to_string())
            })
            .collect();
        Ok(Self {
            dim: config.dim,
            beta: config.beta,
            functions,
            weights,
            values,
            rule,
            setup_seconds: start.elapsed().as_secs_f64(),
        })
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    /// `I_β f` at the nodes of [`TheoremData::rule`], or the reason it is missing.
    pub fn riesz_values(&self, k: usize) -> std::result::Result<&[f64], &str> {
        self.values[k].as_deref().map_err(String::as_str)
    }

    /// Norm ratios for the exponent `p`; `config` is echoed with `config.exponent` as given.
    pub fn report(&self, p: &ExponentField, config: &ExperimentConfig) -> RatioReport {
        let start = Instant::now();
        let exps: Vec<f64> = self.rule.iter().map(|(x, _)| p.eval_f64(x)).collect();
        let tol = config.tolerances.norm;
        let rows = self
            .functions
            .par_iter()
            .enumerate()
            .map(|(k, f)| {
                let mut row = RatioRow {
                    id: format!("{}-{k:04}", f.family().name()),
                    family: f.family(),
                    description: f.describe(),
                    norm_f: 0.0,
                    norm_if: 0.0,
                    ratio: None,
                    flag: None,
                };
                let norms = (|| -> std::result::Result<(f64, f64), String> {
                    let rule = f.norm_rule(&self.rule).map_err(|e| e.to_string())?;
                    let nf = ModularTable::new(|x: &[f64]| f.eval(x), p, &rule)
                        .luxemburg(tol)
                        .map_err(|e| format!("norm of f: {e}"))?;
                    let values = self.riesz_values(k).map_err(|e| format!("I_beta f: {e}"))?;
                    let nif = ModularTable::from_parts(values, &exps, &self.weights)
                        .and_then(|t| t.luxemburg(tol))
                        .map_err(|e| format!("norm of I_beta f: {e}"))?;
                    Ok((nf, nif))
                })();
                match norms {
                    Ok((nf, nif)) => {
                        row.norm_f = nf;
                        row.norm_if = nif;
                        if nf > 0.0 && nf.is_finite() && nif.is_finite() {
                            row.ratio = Some(nif / nf);
                        } else {
                            row.flag = Some(format!("degenerate norms {nf} and {nif}"));
                        }
                    }
                    Err(e) => row.flag = Some(e),
                }
                row
            })
            .collect();
        let truncation = 1.0 - libm::erf(node_extent(&self.rule)).powi(self.dim as i32);
        let contraction = matches!(p.profile(), Profile::Constant { q } if *q == 2.0 && !p.is_conjugate())
            .then_some(config.tolerances.contraction);
        let mut report = RatioReport {
            config: ExperimentConfig {
                exponent: p.id(),
                ..config.clone()
            },
            rows,
            summary: Default::default(),
            timing: None,
        }
        .finish(truncation, contraction, config.tolerances.stability);
        let mut timing = Timing::since(start);
        timing.runtime_seconds = crate::report::sig12(timing.runtime_seconds + self.setup_seconds);
        report.timing = Some(timing);
        report
    }
}

/// Runs the boundedness experiment for `config.exponent`.
pub fn theorem_experiment(config: &ExperimentConfig) -> Result<RatioReport> {
    let p = config.validate_theorem()?;
    Ok(TheoremData::prepare(config)?.report(&p, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::hermite_mode;
    use gauss_riesz::hermite::MultiIndex;

    fn small(dim: usize, beta: f64) -> ExperimentConfig {
        ExperimentConfig {
            dim,
            beta,
            samples: 12,
            ..Default::default()
        }
    }

    #[test]
    fn constant_mode_has_ratio_zero() {
        let c = small(1, 2.0);
        let d = TheoremData::with_functions(&c, vec![hermite_mode(MultiIndex::from([0]))]).unwrap();
        let r = d.report(&ExponentField::constant(2.0).unwrap(), &c);
        assert_eq!(r.rows[0].ratio, Some(0.0));
        approx::assert_relative_eq!(r.rows[0].norm_f, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn modes_under_p2_scale_by_the_multiplier() {
        let c = small(2, 1.0);
        let modes = [[1, 0], [1, 1], [0, 3], [2, 2]];
        let fs = modes.iter().map(|m| hermite_mode(MultiIndex::from(*m))).collect();
        let d = TheoremData::with_functions(&c, fs).unwrap();
        let r = d.report(&ExponentField::constant(2.0).unwrap(), &c);
        for (row, m) in r.rows.iter().zip(modes) {
            let n = (m[0] + m[1]) as f64;
            approx::assert_relative_eq!(row.ratio.unwrap(), n.powf(-0.5), max_relative = 1e-9);
        }
        assert_eq!(r.summary.contraction, Some(true));
    }

    #[test]
    fn small_experiment_is_finite_and_deterministic() {
        let c = ExperimentConfig {
            exponent: "decay:2,1".into(),
            ..small(1, 1.0)
        };
        let a = theorem_experiment(&c).unwrap();
        let b = theorem_experiment(&c).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.summary, b.summary);
        assert_eq!(a.summary.flagged, 0);
        assert!(a.summary.sup_ratio.is_finite() && a.summary.sup_ratio > 0.0);
        for r in &a.rows {
            assert!(r.ratio.unwrap() >= 0.0 && r.ratio.unwrap() <= a.summary.sup_ratio);
        }
    }

    #[test]
    fn rejects_exponents_outside_the_class() {
        let c = ExperimentConfig {
            exponent: "step:1.5,3,1".into(),
            ..small(1, 1.0)
        };
        assert!(theorem_experiment(&c).is_err());
    }
}
