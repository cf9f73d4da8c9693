use alloc::vec::Vec;

use crate::map1d::TwoCycle;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Why a rotation was rejected for a density certificate.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RationalRotationDetail {
    /// The per-`F²` rotation on each circle.
    pub rotation: f64,
    pub numerator: i64,
    pub denominator: i64,
    /// Points an ε-net needs at the requested ε.
    pub required_points: usize,
    pub distinct_points_gamma1: usize,
    pub distinct_points_gamma2: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("no 2-cycle at lambda = {lambda}")]
    NoTwoCycle { lambda: f64 },
    #[error("{} distinct 2-cycles found", .0.len())]
    AmbiguousCycles(Vec<TwoCycle>),
    #[error("no period-doubling window in [{lo}, {hi}]")]
    WindowNotFound { lo: f64, hi: f64 },
    #[error("no fixed point at lambda = {lambda}")]
    NoFixedPoint { lambda: f64 },
    #[error("orbit escaped the family domain at iterate {index} (r = {value})")]
    OrbitEscaped { index: usize, value: f64 },
    #[error(
        "rotation {} is rational ({}/{}) with period below the {} points an eps-net needs",
        .0.rotation, .0.numerator, .0.denominator, .0.required_points
    )]
    RationalRotation(RationalRotationDetail),
}
