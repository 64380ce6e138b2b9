use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{norm, Scalar};

/// Regularity classes an exponent is declared to belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassTags {
    /// Local log-Hölder continuity of `1/p`.
    pub lh0: bool,
    /// Log-Hölder decay of `1/p` toward `1/p_∞`.
    pub lh_inf: bool,
    /// `|p(x) - p_∞| ≤ C_γ / |x|^2`.
    pub pinfty_gamma: bool,
}

impl ClassTags {
    pub const ALL: ClassTags = ClassTags {
        lh0: true,
        lh_inf: true,
        pinfty_gamma: true,
    };
}

/// Radial profile of a built-in exponent, with the parameters it was built from.
#[derive(Clone)]
pub enum Profile {
    /// `p ≡ q`.
    Constant { q: f64 },
    /// `p_∞ + c / (1 + |x|^2)`.
    Decay { p_inf: f64, c: f64 },
    /// `p_∞ + c / log(e + |x|)`.
    LogDecay { p_inf: f64, c: f64 },
    /// `p_∞ + c sin(k |x|) / (1 + |x|)`.
    Oscillating { p_inf: f64, c: f64, k: f64 },
    /// `p_∞ + c (1 - |x|^2/r^2)_+^2`.
    Bump { p_inf: f64, c: f64, r: f64 },
    /// `low` on `|x| < r`, `high` elsewhere.
    Step { low: f64, high: f64, r: f64 },
    /// A user-supplied field.
    Custom(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Custom(_) => write!(f, "Custom(..)"),
            other => write!(f, "{}", other.id()),
        }
    }
}

impl Profile {
    fn at_radius(&self, r: f64) -> f64 {
        match *self {
            Profile::Constant { q } => q,
            Profile::Decay { p_inf, c } => p_inf + c / (1.0 + r * r),
            Profile::LogDecay { p_inf, c } => p_inf + c / (std::f64::consts::E + r).ln(),
            Profile::Oscillating { p_inf, c, k } => p_inf + c * (k * r).sin() / (1.0 + r),
            Profile::Bump { p_inf, c, r: width } => {
                let s = (1.0 - r * r / (width * width)).max(0.0);
                p_inf + c * s * s
            }
            Profile::Step { low, high, r: jump } => {
                if r < jump {
                    low
                } else {
                    high
                }
            }
            Profile::Custom(_) => unreachable!("custom profiles are evaluated on points"),
        }
    }

    /// The string id this profile parses from, e.g. `decay:2,1`.
    pub fn id(&self) -> String {
        match *self {
            Profile::Constant { q } => format!("constant:{q}"),
            Profile::Decay { p_inf, c } => format!("decay:{p_inf},{c}"),
            Profile::LogDecay { p_inf, c } => format!("logdecay:{p_inf},{c}"),
            Profile::Oscillating { p_inf, c, k } => format!("osc:{p_inf},{c},{k}"),
            Profile::Bump { p_inf, c, r } => format!("bump:{p_inf},{c},{r}"),
            Profile::Step { low, high, r } => format!("step:{low},{high},{r}"),
            Profile::Custom(_) => "custom".to_string(),
        }
    }
}

/// An exponent function `p(·): ℝ^d → [1, ∞)` with its declared bounds and classes.
#[derive(Debug, Clone)]
pub struct ExponentField {
    profile: Profile,
    conjugated: bool,
    p_minus: f64,
    p_plus: f64,
    p_infty: Option<f64>,
    tags: ClassTags,
    c_gamma: Option<f64>,
}

impl ExponentField {
    pub fn constant(q: f64) -> Result<Self> {
        Self::checked(Profile::Constant { q }, q, q, Some(q), ClassTags::ALL, Some(0.0))
    }

    /// `p_∞ + c / (1 + |x|^2)`, in `P^∞_γ ∩ LH_0` with `C_γ = |c|`.
    pub fn decay(p_inf: f64, c: f64) -> Result<Self> {
        Self::checked(
            Profile::Decay { p_inf, c },
            p_inf.min(p_inf + c),
            p_inf.max(p_inf + c),
            Some(p_inf),
            ClassTags::ALL,
            Some(c.abs()),
        )
    }

    /// `p_∞ + c / log(e + |x|)`: log-Hölder, but not in `P^∞_γ`.
    pub fn log_decay(p_inf: f64, c: f64) -> Result<Self> {
        Self::checked(
            Profile::LogDecay { p_inf, c },
            p_inf.min(p_inf + c),
            p_inf.max(p_inf + c),
            Some(p_inf),
            ClassTags {
                lh0: true,
                lh_inf: true,
                pinfty_gamma: false,
            },
            None,
        )
    }

    /// `p_∞ + c sin(k|x|) / (1 + |x|)`: Lipschitz, decaying too slowly for `P^∞_γ`.
    pub fn oscillating(p_inf: f64, c: f64, k: f64) -> Result<Self> {
        Self::checked(
            Profile::Oscillating { p_inf, c, k },
            p_inf - c.abs(),
            p_inf + c.abs(),
            Some(p_inf),
            ClassTags {
                lh0: true,
                lh_inf: false,
                pinfty_gamma: false,
            },
            None,
        )
    }

    /// `p_∞ + c (1 - |x|^2/r^2)_+^2`, in `P^∞_γ ∩ LH_0` with `C_γ = |c| r^2`.
    pub fn bump(p_inf: f64, c: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument("bump radius must be positive".into()));
        }
        Self::checked(
            Profile::Bump { p_inf, c, r },
            p_inf.min(p_inf + c),
            p_inf.max(p_inf + c),
            Some(p_inf),
            ClassTags::ALL,
            Some(c.abs() * r * r),
        )
    }

    /// A jump from `low` to `high` at `|x| = r`: not locally log-Hölder.
    pub fn step(low: f64, high: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument("step radius must be positive".into()));
        }
        Self::checked(
            Profile::Step { low, high, r },
            low.min(high),
            low.max(high),
            Some(high),
            ClassTags {
                lh0: false,
                lh_inf: true,
                pinfty_gamma: true,
            },
            Some((high - low).abs() * r * r),
        )
    }

    /// A field given by a closure, with declared bounds. No class is assumed.
    pub fn custom<F>(p: F, p_minus: f64, p_plus: f64, p_infty: Option<f64>) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::checked(Profile::Custom(Arc::new(p)), p_minus, p_plus, p_infty, ClassTags::default(), None)
    }

    fn checked(
        profile: Profile,
        p_minus: f64,
        p_plus: f64,
        p_infty: Option<f64>,
        tags: ClassTags,
        c_gamma: Option<f64>,
    ) -> Result<Self> {
        let finite = [p_minus, p_plus].iter().chain(p_infty.iter()).all(|v| v.is_finite());
        if !finite || p_minus < 1.0 || p_minus > p_plus {
            return Err(Error::InvalidArgument(format!(
                "exponent bounds must satisfy 1 <= p_minus <= p_plus < inf, got [{p_minus}, {p_plus}]"
            )));
        }
        if let Some(pi) = p_infty {
            if pi < p_minus || pi > p_plus {
                return Err(Error::InvalidArgument(format!("p_infty {pi} outside [{p_minus}, {p_plus}]")));
            }
        }
        Ok(Self {
            profile,
            conjugated: false,
            p_minus,
            p_plus,
            p_infty,
            tags,
            c_gamma,
        })
    }

    /// `p(x)`.
    pub fn eval<S: Scalar>(&self, x: &[S]) -> S {
        S::of(self.eval_f64(x))
    }

    pub fn eval_f64<S: Scalar>(&self, x: &[S]) -> f64 {
        let p = match &self.profile {
            Profile::Custom(f) => {
                let xs: Vec<f64> = x.iter().map(|v| v.as_f64()).collect();
                f(&xs)
            }
            other => other.at_radius(norm(x).as_f64()),
        };
        if self.conjugated {
            p / (p - 1.0)
        } else {
            p
        }
    }

    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn p_infty(&self) -> Option<f64> {
        self.p_infty
    }

    pub fn tags(&self) -> ClassTags {
        self.tags
    }

    /// Declared `C_γ` for `P^∞_γ` exponents.
    pub fn c_gamma(&self) -> Option<f64> {
        self.c_gamma
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn is_conjugate(&self) -> bool {
        self.conjugated
    }

    /// String id of the field, `conj(..)` around conjugates.
    pub fn id(&self) -> String {
        if self.conjugated {
            format!("conj({})", self.profile.id())
        } else {
            self.profile.id()
        }
    }

    /// `p'(x) = p(x) / (p(x) - 1)`.
    pub fn conjugate(&self) -> Result<Self> {
        if self.p_minus <= 1.0 {
            return Err(Error::InvalidArgument("conjugate exponent is unbounded when p_minus = 1".into()));
        }
        let conj = |p: f64| p / (p - 1.0);
        let c_gamma = match (self.c_gamma, self.p_infty) {
            (Some(c), Some(pi)) => Some(c / ((self.p_minus - 1.0) * (pi - 1.0))),
            _ => None,
        };
        Ok(Self {
            profile: self.profile.clone(),
            conjugated: !self.conjugated,
            p_minus: conj(self.p_plus),
            p_plus: conj(self.p_minus),
            p_infty: self.p_infty.map(conj),
            tags: self.tags,
            c_gamma,
        })
    }
}

impl FromStr for ExponentField {
    type Err = Error;

    /// Parses ids such as `constant:2`, `decay:2,1`, `logdecay:2,1`, `osc:2,0.5,3`,
    /// `bump:2,1,1.5`, `step:1.5,3,1`. Trailing parameters with defaults may be omitted.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let params: Vec<f64> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| {
                    a.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad exponent parameter '{a}' in '{s}'")))
                })
                .collect::<Result<_>>()?
        };
        let get = |i: usize, default: Option<f64>| -> Result<f64> {
            params
                .get(i)
                .copied()
                .or(default)
                .ok_or_else(|| Error::InvalidArgument(format!("exponent '{s}' is missing parameter {}", i + 1)))
        };
        let max_len = match name.trim() {
            "constant" => 1,
            "decay" | "logdecay" => 2,
            "osc" | "bump" | "step" => 3,
            other => return Err(Error::InvalidArgument(format!("unknown exponent preset '{other}'"))),
        };
        if params.len() > max_len {
            return Err(Error::InvalidArgument(format!("too many parameters in exponent '{s}'")));
        }
        match name.trim() {
            "constant" => Self::constant(get(0, None)?),
            "decay" => Self::decay(get(0, None)?, get(1, None)?),
            "logdecay" => Self::log_decay(get(0, None)?, get(1, None)?),
            "osc" => Self::oscillating(get(0, None)?, get(1, None)?, get(2, Some(3.0))?),
            "bump" => Self::bump(get(0, None)?, get(1, None)?, get(2, Some(1.0))?),
            _ => Self::step(get(0, None)?, get(1, None)?, get(2, Some(1.0))?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn presets_evaluate() {
        let p = ExponentField::decay(2.0, 1.0).unwrap();
        assert_eq!(p.eval(&[0.0f64, 0.0]), 3.0);
        assert_relative_eq!(p.eval(&[1.0f64]), 2.5);
        assert_eq!(p.p_minus(), 2.0);
        assert_eq!(p.p_plus(), 3.0);
        let s = ExponentField::step(1.5, 3.0, 1.0).unwrap();
        assert_eq!(s.eval(&[0.5f64]), 1.5);
        assert_eq!(s.eval(&[1.5f64]), 3.0);
    }

    #[test]
    fn conjugates() {
        let p = ExponentField::constant(2.0).unwrap().conjugate().unwrap();
        assert_eq!(p.eval(&[0.3f64]), 2.0);
        let p = ExponentField::constant(3.0).unwrap().conjugate().unwrap();
        assert_eq!(p.eval(&[0.3f64]), 1.5);
        let p = ExponentField::decay(2.0, 1.0).unwrap().conjugate().unwrap();
        assert_eq!(p.eval(&[0.0f64]), 1.5);
        assert_eq!(p.p_infty(), Some(2.0));
        assert_eq!(p.p_minus(), 1.5);
        assert_eq!(p.p_plus(), 2.0);
        assert!(ExponentField::constant(1.0).unwrap().conjugate().is_err());
        let back = p.conjugate().unwrap();
        assert_eq!(back.eval(&[0.7f64]), ExponentField::decay(2.0, 1.0).unwrap().eval(&[0.7f64]));
    }

    #[test]
    fn parse_ids() {
        let p: ExponentField = "decay:3,0.5".parse().unwrap();
        assert_eq!(p.id(), "decay:3,0.5");
        assert_eq!(p.c_gamma(), Some(0.5));
        assert!("nonsense:1".parse::<ExponentField>().is_err());
        assert!("decay:2".parse::<ExponentField>().is_err());
        assert!("constant:0.5".parse::<ExponentField>().is_err());
        assert!("constant:2,3".parse::<ExponentField>().is_err());
        let b: ExponentField = "bump:2,1".parse().unwrap();
        assert_eq!(b.id(), "bump:2,1,1");
    }
}
