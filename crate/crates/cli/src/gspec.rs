//! Closed-form rotation laws `g(λ, r)` selectable from the command line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use skewcircle_core::RotationFn;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GSpec {
    /// `g = a`
    Const { a: f64 },
    /// `g = a + b·r`
    Affine { a: f64, b: f64 },
    /// `g = a·(1 + r)`
    Scaled { a: f64 },
}

impl GSpec {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            GSpec::Const { a } => a,
            GSpec::Affine { a, b } => a + b * r,
            GSpec::Scaled { a } => a * (1.0 + r),
        }
    }
}

impl RotationFn for GSpec {
    fn amount(&self, _lambda: f64, r: f64) -> f64 {
        self.eval(r)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GSpecError {
    #[error("expected <kind>:<coefficients>, got {0:?}")]
    MissingKind(String),
    #[error("unknown g kind {0:?} (expected const, affine or scaled)")]
    UnknownKind(String),
    #[error("{kind} takes {expected} coefficient(s), got {got}")]
    Arity { kind: &'static str, expected: usize, got: usize },
    #[error("coefficient {0:?} is not a finite number")]
    BadCoefficient(String),
}

impl FromStr for GSpec {
    type Err = GSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| GSpecError::MissingKind(s.to_owned()))?;
        let coeffs = rest
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| GSpecError::BadCoefficient(c.to_owned()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let arity = |kind: &'static str, expected: usize| {
            if coeffs.len() == expected {
                Ok(())
            } else {
                Err(GSpecError::Arity { kind, expected, got: coeffs.len() })
            }
        };
        match kind.trim() {
            "const" => arity("const", 1).map(|_| GSpec::Const { a: coeffs[0] }),
            "affine" => arity("affine", 2).map(|_| GSpec::Affine { a: coeffs[0], b: coeffs[1] }),
            "scaled" => arity("scaled", 1).map(|_| GSpec::Scaled { a: coeffs[0] }),
            other => Err(GSpecError::UnknownKind(other.to_owned())),
        }
    }
}

impl fmt::Display for GSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSpec::Const { a } => write!(f, "const:{a}"),
            GSpec::Affine { a, b } => write!(f, "affine:{a},{b}"),
            GSpec::Scaled { a } => write!(f, "scaled:{a}"),
        }
    }
}

impl TryFrom<String> for GSpec {
    type Error = GSpecError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GSpec> for String {
    fn from(g: GSpec) -> String {
        g.to_string()
    }
}
