//! Report types and their JSON / CSV rendering.
//!
//! Every floating-point number is written with 12 significant digits. The
//! `timing` block is the only part of a report that varies between identical runs.

use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{ExperimentConfig, Format, Suite};
use crate::error::{Error, Result};
use crate::families::Family;

/// Rounds to 12 significant digits; non-finite values pass through.
pub fn sig12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        serde_json::to_string(&sig12(v)).expect("finite float")
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(sig12).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Wall-clock facts about a run; excluded from the determinism contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub generated_at_unix: u64,
    pub runtime_seconds: f64,
}

impl Timing {
    pub fn since(start: Instant) -> Self {
        Self {
            generated_at_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            runtime_seconds: sig12(start.elapsed().as_secs_f64()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub id: String,
    pub family: Family,
    pub description: String,
    pub norm_f: f64,
    pub norm_if: f64,
    /// `None` when the row is flagged.
    pub ratio: Option<f64>,
    pub flag: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub functions: usize,
    pub flagged: usize,
    pub sup_ratio: f64,
    /// Sup over the first half of the rows.
    pub half_sup_ratio: f64,
    pub stability_factor: f64,
    pub stable: bool,
    /// `Some` for `p ≡ 2`, where `I_β` is a contraction.
    pub contraction: Option<bool>,
    /// `γ_d` mass outside the box spanned by the norm nodes.
    pub truncation_bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub config: ExperimentConfig,
    pub rows: Vec<RatioRow>,
    pub summary: RatioSummary,
    pub timing: Option<Timing>,
}

impl RatioReport {
    /// An empty report: no rows and a zeroed summary.
    pub fn empty(config: ExperimentConfig) -> Self {
        Self {
            config,
            rows: Vec::new(),
            summary: RatioSummary::default(),
            timing: None,
        }
    }

    /// Fills the summary from the rows and rounds every number to 12 significant digits.
    pub fn finish(mut self, truncation_bound: f64, contraction_slack: Option<f64>, stability: f64) -> Self {
        for r in &mut self.rows {
            r.norm_f = sig12(r.norm_f);
            r.norm_if = sig12(r.norm_if);
            r.ratio = r.ratio.map(sig12);
        }
        if self.rows.is_empty() {
            self.summary = RatioSummary::default();
            return self;
        }
        let n = self.rows.len();
        let half = n.div_ceil(2);
        let mut sup = 0.0f64;
        let mut half_sup = 0.0f64;
        for (i, r) in self.rows.iter().enumerate() {
            if let Some(q) = r.ratio {
                sup = sup.max(q);
            }
            if i + 1 == half {
                half_sup = sup;
            }
        }
        let flagged = self.rows.iter().filter(|r| r.flag.is_some()).count();
        let factor = if sup == 0.0 { 1.0 } else { sup / half_sup };
        let stable = sup.is_finite() && factor <= stability;
        let contraction = contraction_slack.map(|s| sup <= 1.0 + s);
        self.summary = RatioSummary {
            functions: n,
            flagged,
            sup_ratio: sup,
            half_sup_ratio: half_sup,
            stability_factor: sig12(factor),
            stable,
            contraction,
            truncation_bound: sig12(truncation_bound),
            passed: flagged == 0 && stable && contraction.unwrap_or(true),
        };
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Preconditions of the check do not hold for this configuration.
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: String,
    pub status: Status,
    /// The measured quantity the check thresholds.
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: ExperimentConfig,
    pub checks: Vec<CheckOutcome>,
    pub theorem: Option<RatioReport>,
    pub passed: bool,
    pub timing: Option<Timing>,
}

/// Tabular view used for CSV output.
pub trait Tabular {
    fn header(&self) -> Vec<&'static str>;
    fn records(&self) -> Vec<Vec<String>>;
    /// Key/value lines written after the table, each prefixed by `# `.
    fn trailer(&self) -> Vec<(String, String)>;
}

impl Tabular for RatioReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["id", "family", "description", "norm_f", "norm_if", "ratio", "flag"]
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.id.clone(),
                    r.family.name().to_string(),
                    r.description.clone(),
                    fmt_num(r.norm_f),
                    fmt_num(r.norm_if),
                    r.ratio.map(fmt_num).unwrap_or_default(),
                    r.flag.clone().unwrap_or_default(),
                ]
            })
            .collect()
    }

    fn trailer(&self) -> Vec<(String, String)> {
        let s = &self.summary;
        let mut out = vec![
            ("exponent".into(), self.config.exponent.clone()),
            ("dim".into(), self.config.dim.to_string()),
            ("beta".into(), fmt_num(self.config.beta)),
            ("seed".into(), self.config.seed.to_string()),
            ("functions".into(), s.functions.to_string()),
            ("flagged".into(), s.flagged.to_string()),
            ("sup_ratio".into(), fmt_num(s.sup_ratio)),
            ("half_sup_ratio".into(), fmt_num(s.half_sup_ratio)),
            ("stability_factor".into(), fmt_num(s.stability_factor)),
            ("stable".into(), s.stable.to_string()),
            ("truncation_bound".into(), fmt_num(s.truncation_bound)),
            ("passed".into(), s.passed.to_string()),
        ];
        if let Some(c) = s.contraction {
            out.push(("contraction".into(), c.to_string()));
        }
        out.extend(timing_trailer(&self.timing));
        out
    }
}

impl Tabular for SuiteReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["suite", "check", "status", "value", "threshold", "detail"]
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.checks
            .iter()
            .map(|c| {
                vec![
                    c.suite.name().to_string(),
                    c.name.clone(),
                    serde_json::to_value(&c.status)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                    c.value.map(fmt_num).unwrap_or_default(),
                    c.threshold.map(fmt_num).unwrap_or_default(),
                    c.detail.clone(),
                ]
            })
            .collect()
    }

    fn trailer(&self) -> Vec<(String, String)> {
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        let mut out = vec![
            ("dim".into(), self.config.dim.to_string()),
            ("beta".into(), fmt_num(self.config.beta)),
            ("seed".into(), self.config.seed.to_string()),
            ("checks".into(), self.checks.len().to_string()),
            ("failed".into(), failed.to_string()),
            ("passed".into(), self.passed.to_string()),
        ];
        if let Some(t) = &self.theorem {
            out.push(("theorem_sup_ratio".into(), fmt_num(t.summary.sup_ratio)));
            out.push(("theorem_passed".into(), t.summary.passed.to_string()));
        }
        out.extend(timing_trailer(&self.timing));
        out
    }
}

fn timing_trailer(t: &Option<Timing>) -> Vec<(String, String)> {
    match t {
        Some(t) => vec![
            ("generated_at_unix".into(), t.generated_at_unix.to_string()),
            ("runtime_seconds".into(), fmt_num(t.runtime_seconds)),
        ],
        None => Vec::new(),
    }
}

pub fn render_json<R: Serialize>(report: &R) -> Result<String> {
    let mut v = serde_json::to_value(report).map_err(|e| Error::Serialise(e.to_string()))?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Serialise(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn render_csv<R: Tabular>(report: &R) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(report.header()).map_err(|e| Error::Serialise(e.to_string()))?;
    for r in report.records() {
        w.write_record(&r).map_err(|e| Error::Serialise(e.to_string()))?;
    }
    let mut out = String::from_utf8(w.into_inner().map_err(|e| Error::Serialise(e.to_string()))?)
        .map_err(|e| Error::Serialise(e.to_string()))?;
    for (k, v) in report.trailer() {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    Ok(out)
}

pub fn render<R: Serialize + Tabular>(report: &R, format: Format) -> Result<String> {
    match format {
        Format::Json => render_json(report),
        Format::Csv => render_csv(report),
    }
}

/// Writes `report` to `path` in the requested format.
pub fn emit_report<R: Serialize + Tabular>(report: &R, format: Format, path: &Path) -> Result<()> {
    let text = render(report, format)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(std::f64::consts::PI), 3.14159265359);
        assert_eq!(sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(sig12(0.0), 0.0);
        assert!(sig12(f64::NAN).is_nan());
        assert_eq!(fmt_num(2.0f64.sqrt()), "1.41421356237");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn json_rounding_walks_nested_values() {
        let v = serde_json::json!({"a": [1.0 / 3.0, {"b": 2.0f64.sqrt()}], "n": 7});
        let s = render_json(&v).unwrap();
        assert!(s.contains("0.333333333333"));
        assert!(s.contains("1.41421356237"));
        assert!(s.contains("\"n\": 7"));
    }

    #[test]
    fn summary_from_rows() {
        let row = |id: &str, q: f64| RatioRow {
            id: id.into(),
            family: Family::Bump,
            description: String::new(),
            norm_f: 1.0,
            norm_if: q,
            ratio: Some(q),
            flag: None,
        };
        let mut r = RatioReport::empty(ExperimentConfig::default());
        r.rows = vec![row("a", 0.5), row("b", 0.4), row("c", 0.6), row("d", 0.2)];
        let r = r.finish(0.0, Some(1e-6), 1.5);
        assert_eq!(r.summary.sup_ratio, 0.6);
        assert_eq!(r.summary.half_sup_ratio, 0.5);
        assert_eq!(r.summary.stability_factor, 1.2);
        assert!(r.summary.passed);
        assert_eq!(r.summary.contraction, Some(true));
    }
}
