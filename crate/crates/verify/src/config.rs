//! Experiment configuration: one JSON document, every field optional.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gauss_riesz::varlp::ExponentField;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hermite,
    Semigroup,
    RieszAgreement,
    Varlp,
    Geometry,
    Bounds,
    Theorem,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Hermite,
        Suite::Semigroup,
        Suite::RieszAgreement,
        Suite::Varlp,
        Suite::Geometry,
        Suite::Bounds,
        Suite::Theorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hermite => "hermite",
            Suite::Semigroup => "semigroup",
            Suite::RieszAgreement => "riesz-agreement",
            Suite::Varlp => "varlp",
            Suite::Geometry => "geometry",
            Suite::Bounds => "bounds",
            Suite::Theorem => "theorem",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Config(format!("unknown format '{other}'"))),
        }
    }
}

/// Work limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budget {
    /// Gauss–Hermite points per axis for `‖I_β f‖`; `null` picks 48, 24, 12 for d = 1, 2, 3.
    pub norm_points: Option<usize>,
    /// Largest order in the random Hermite expansions.
    pub hermite_degree: u32,
    /// Panels allowed to every adaptive integral.
    pub max_panels: usize,
    /// Points of the log-spaced `t` grid in the minimiser check.
    pub t_grid: usize,
    /// `t`-samples per pair for the `b > 0` inequality.
    pub t_samples: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            norm_points: None,
            hermite_degree: 6,
            max_panels: 4000,
            t_grid: 2000,
            t_samples: 100,
        }
    }
}

impl Budget {
    pub fn norm_points(&self, dim: usize) -> usize {
        self.norm_points.unwrap_or(match dim {
            1 => 48,
            2 => 24,
            _ => 12,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative accuracy of every `I_β f(x)` value.
    pub riesz: f64,
    /// Relative bracket width of the Luxemburg bisection.
    pub norm: f64,
    /// Largest allowed ratio of full-sample to half-sample constants.
    pub stability: f64,
    /// Slack on the `p ≡ 2` contraction `‖I_β f‖ ≤ ‖f‖`.
    pub contraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            riesz: 1e-8,
            norm: 1e-10,
            stability: 1.5,
            contraction: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub beta: f64,
    /// Exponent preset id such as `decay:2,1` or `constant:2`.
    pub exponent: String,
    pub seed: u64,
    /// Test functions in the theorem experiment.
    pub samples: usize,
    /// Pairs or points in each sampled check of the other suites.
    pub pairs: usize,
    pub suites: Vec<Suite>,
    pub budget: Budget,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            beta: 2.0,
            exponent: "decay:2,1".to_string(),
            seed: 42,
            samples: 200,
            pairs: 1000,
            suites: Suite::ALL.to_vec(),
            budget: Budget::default(),
            tolerances: Tolerances::default(),
            output: None,
            format: Format::Json,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn exponent_field(&self) -> Result<ExponentField> {
        self.exponent
            .parse()
            .map_err(|e: gauss_riesz::Error| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::Config(format!("dim must be 1, 2 or 3, got {}", self.dim)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Config(format!("beta must be positive, got {}", self.beta)));
        }
        self.exponent_field()?;
        let b = &self.budget;
        if self.samples == 0
            || self.pairs == 0
            || b.norm_points == Some(0)
            || b.hermite_degree == 0
            || b.max_panels == 0
            || b.t_grid < 2
            || b.t_samples == 0
        {
            return Err(Error::Config("samples and budgets must be positive".into()));
        }
        let t = &self.tolerances;
        let positive = [t.riesz, t.norm, t.contraction].iter().all(|v| *v > 0.0 && v.is_finite());
        if !positive || !(t.stability >= 1.0) {
            return Err(Error::Config("tolerances must be positive and stability at least 1".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::Config("no suites selected".into()));
        }
        Ok(())
    }

    /// Extra checks for the boundedness experiment.
    pub fn validate_theorem(&self) -> Result<ExponentField> {
        self.validate()?;
        if self.beta < 1.0 {
            return Err(Error::Config(format!("the theorem experiment needs beta >= 1, got {}", self.beta)));
        }
        let p = self.exponent_field()?;
        let tags = p.tags();
        if !(tags.lh0 && tags.pinfty_gamma) || p.p_minus() <= 1.0 || p.p_infty().is_none() {
            return Err(Error::Config(format!(
                "exponent '{}' must be log-Hölder, in the P-infinity class and have p_minus > 1",
                self.exponent
            )));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_round_trip() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), c);
        assert_eq!(ExperimentConfig::from_json("{}").unwrap(), c);
    }

    #[test]
    fn rejects_bad_documents() {
        for bad in [
            r#"{"dim": 4}"#,
            r#"{"beta": 0}"#,
            r#"{"exponent": "wiggly:2"}"#,
            r#"{"samples": 0}"#,
            r#"{"pairs": 0}"#,
            r#"{"colour": "red"}"#,
            r#"{"budget": {"grid": 3}}"#,
            r#"{"suites": ["everything"]}"#,
            r#"{"tolerances": {"stability": 0.5}}"#,
        ] {
            assert!(matches!(ExperimentConfig::from_json(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn theorem_preconditions() {
        let mut c = ExperimentConfig {
            beta: 0.5,
            ..Default::default()
        };
        assert!(c.validate_theorem().is_err());
        c.beta = 1.0;
        c.exponent = "logdecay:2,1".into();
        assert!(c.validate_theorem().is_err());
        c.exponent = "decay:2,1".into();
        assert!(c.validate_theorem().is_ok());
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        let json = serde_json::to_string(&Suite::RieszAgreement).unwrap();
        assert_eq!(json, "\"riesz-agreement\"");
    }
}
