//! Run configuration: defaults, an optional TOML file, and flag overrides.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use skewcircle_core::circle::{DEFAULT_MAX_DENOMINATOR, GOLDEN_CONJUGATE};
use skewcircle_core::map1d::{DEFAULT_ROOT_TOL, DEFAULT_WINDOW_TOL};
use skewcircle_core::verify::{DensityOptions, VerifyConfig};

use crate::gspec::GSpec;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config file {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// Human-readable summary on stdout.
    #[default]
    Text,
    /// The JSON document on stdout.
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub family: String,
    pub lambda: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    /// Grid points for a sweep.
    pub points: usize,
    pub alpha: f64,
    pub g: Option<GSpec>,
    /// Points per circle for the density certificate.
    pub orbit_len: usize,
    /// Burn-in steps for the attraction check.
    pub transient: usize,
    pub eps: f64,
    /// Certificate tolerance for the invariance checks.
    pub tol: f64,
    pub root_tol: f64,
    pub window_tol: f64,
    pub disjoint_delta: f64,
    pub n_samples: usize,
    pub attraction_starts: usize,
    pub attraction_tol: f64,
    pub min_attraction: f64,
    pub max_denominator: i64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub orbit_csv: Option<PathBuf>,
    pub embed: bool,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VerifyConfig::default();
        RunConfig {
            family: "logistic".to_owned(),
            lambda: None,
            lambda_min: None,
            lambda_max: None,
            points: 100,
            alpha: GOLDEN_CONJUGATE,
            g: None,
            orbit_len: v.density.k_max,
            transient: v.attraction_transient,
            eps: v.density.eps,
            tol: v.tol,
            root_tol: DEFAULT_ROOT_TOL,
            window_tol: DEFAULT_WINDOW_TOL,
            disjoint_delta: v.disjoint_delta,
            n_samples: v.n_samples,
            attraction_starts: v.attraction_starts,
            attraction_tol: v.attraction_tol,
            min_attraction: v.min_attraction,
            max_denominator: DEFAULT_MAX_DENOMINATOR,
            seed: v.seed,
            out: None,
            orbit_csv: None,
            embed: false,
            format: OutputFormat::Text,
        }
    }
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_owned(),
            source,
        })
    }

    /// Checks fields shared by every command.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.family != "logistic" {
            return Err(invalid(format!("unknown map family {:?}", self.family)));
        }
        let positive = [
            ("eps", self.eps),
            ("tol", self.tol),
            ("root-tol", self.root_tol),
            ("window-tol", self.window_tol),
            ("disjoint-delta", self.disjoint_delta),
            ("attraction-tol", self.attraction_tol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be a positive number, got {v}")));
            }
        }
        let counts = [
            ("points", self.points),
            ("orbit-len", self.orbit_len),
            ("n-samples", self.n_samples),
            ("attraction-starts", self.attraction_starts),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(invalid(format!("{name} must be at least 1")));
            }
        }
        if self.orbit_len < 2 {
            return Err(invalid("orbit-len must be at least 2"));
        }
        if self.max_denominator < 1 {
            return Err(invalid("max-denominator must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.min_attraction) {
            return Err(invalid("min-attraction must lie in [0, 1]"));
        }
        if !self.alpha.is_finite() {
            return Err(invalid("alpha must be finite"));
        }
        Ok(())
    }

    pub fn require_lambda(&self) -> Result<f64, ConfigError> {
        match self.lambda {
            Some(l) if l.is_finite() => Ok(l),
            Some(l) => Err(invalid(format!("lambda must be finite, got {l}"))),
            None => Err(invalid("--lambda is required")),
        }
    }

    pub fn require_range(&self) -> Result<(f64, f64), ConfigError> {
        match (self.lambda_min, self.lambda_max) {
            (Some(lo), Some(hi)) if lo.is_finite() && hi.is_finite() && lo < hi => Ok((lo, hi)),
            (Some(lo), Some(hi)) => Err(invalid(format!(
                "lambda range must satisfy min < max, got [{lo}, {hi}]"
            ))),
            _ => Err(invalid("--lambda-min and --lambda-max are required")),
        }
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            n_samples: self.n_samples,
            tol: self.tol,
            disjoint_delta: self.disjoint_delta,
            density: DensityOptions {
                eps: self.eps,
                k_max: self.orbit_len,
                max_denominator: self.max_denominator,
                ..DensityOptions::default()
            },
            attraction_starts: self.attraction_starts,
            attraction_transient: self.transient,
            attraction_tol: self.attraction_tol,
            min_attraction: self.min_attraction,
            seed: self.seed,
        }
    }
}
