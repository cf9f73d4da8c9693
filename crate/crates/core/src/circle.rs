//! The circle `S¹ = ℝ/ℤ`: points, rotation, the quotient metric, and the
//! statistics used to measure how well a finite orbit fills the circle.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::error::{Error, Result};

/// Default merge tolerance when counting distinct gap lengths.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

/// Default largest denominator considered by [`rationality_diagnostic`].
pub const DEFAULT_MAX_DENOMINATOR: i64 = 1_000_000;

/// `(√5 − 1) / 2`, the default rotation.
pub const GOLDEN_CONJUGATE: f64 = 0.618_033_988_749_894_9;

/// A class `[θ]` in `ℝ/ℤ`, stored as its representative in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub const ZERO: CirclePoint = CirclePoint(0.0);

    pub fn new(x: f64) -> Result<Self> {
        normalize(x)
    }

    #[inline]
    pub fn rep(self) -> f64 {
        self.0
    }

    pub fn rotate(self, a: f64) -> Result<Self> {
        rotate(self, a)
    }

    pub fn dist(self, other: CirclePoint) -> f64 {
        circle_dist(self, other)
    }

    pub fn embed(self) -> (f64, f64) {
        circle_embed(self)
    }
}

/// Canonical representative `x − ⌊x⌋`.
///
/// A result of exactly `1.0` (possible when `x` sits just below an integer)
/// is mapped to `0.0`.
#[inline]
pub fn normalize(x: f64) -> Result<CirclePoint> {
    if !x.is_finite() {
        return Err(Error::Domain("circle coordinate must be finite"));
    }
    Ok(CirclePoint(wrap(x)))
}

#[inline]
pub(crate) fn wrap(x: f64) -> f64 {
    let y = x - libm::floor(x);
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

#[inline]
pub fn rotate(p: CirclePoint, a: f64) -> Result<CirclePoint> {
    normalize(p.0 + a)
}

/// `inf { |x − y + k| : k ∈ ℤ }`, always in `[0, 0.5]`.
#[inline]
pub fn circle_dist(p: CirclePoint, q: CirclePoint) -> f64 {
    let d = libm::fabs(p.0 - q.0);
    d.min(1.0 - d)
}

/// `[x] ↦ e^{2πix}` as a point of the unit circle in the plane.
pub fn circle_embed(p: CirclePoint) -> (f64, f64) {
    let t = TAU * p.0;
    (libm::cos(t), libm::sin(t))
}

/// Partial quotients `a₁, a₂, …` of `x ∈ (0, 1)`.
///
/// Expansion stops after `max_terms` quotients or once the remainder is
/// smaller than the round-off accumulated so far, so an exactly representable
/// rational terminates.
pub fn continued_fraction(x: f64, max_terms: usize) -> Result<Vec<u64>> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain("continued fraction input must lie in (0, 1)"));
    }
    if max_terms == 0 {
        return Err(Error::InvalidParameter("max_terms must be at least 1"));
    }
    // Quotients past 2^53 are not resolvable in f64.
    const MAX_QUOTIENT: f64 = 9_007_199_254_740_992.0;

    let mut terms = Vec::new();
    let mut y = x;
    let mut err = f64::EPSILON * x;
    while terms.len() < max_terms {
        let inv = 1.0 / y;
        let mut a = libm::floor(inv);
        if a >= MAX_QUOTIENT {
            break;
        }
        let frac = inv - a;
        err = err / (y * y) + f64::EPSILON * inv;
        if 1.0 - frac <= err {
            a += 1.0;
            terms.push(a as u64);
            break;
        }
        terms.push(a as u64);
        if frac <= err {
            break;
        }
        y = frac;
    }
    Ok(terms)
}

/// Returns `(p, q)` when `x mod 1` is indistinguishable from `p/q` at the
/// resolution set by `max_denominator`, i.e. `|x − p/q| < 1 / (2 q · max_denominator)`
/// for some `q ≤ max_denominator`. `None` means "effectively irrational".
///
/// Every fraction meeting that bound is a convergent of `x`, so only
/// convergents are examined. The smallest qualifying denominator wins.
pub fn rationality_diagnostic(x: f64, max_denominator: i64) -> Option<(i64, i64)> {
    if !x.is_finite() || max_denominator < 1 {
        return None;
    }
    let y = wrap(x);
    let max = max_denominator as f64;
    if y < 1.0 / (2.0 * max) {
        return Some((0, 1));
    }
    let terms = continued_fraction(y, 64).ok()?;
    let (mut h_prev, mut k_prev): (i128, i128) = (1, 0);
    let (mut h, mut k): (i128, i128) = (0, 1);
    for a in terms {
        let a = i128::from(a);
        let h_next = a * h + h_prev;
        let k_next = a * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        if k > i128::from(max_denominator) {
            break;
        }
        let (p, q) = (h as f64, k as f64);
        if libm::fabs(y - p / q) < 1.0 / (2.0 * q * max) {
            return Some((h as i64, k as i64));
        }
    }
    None
}

/// Circular gaps between adjacent points of a finite set on `S¹`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GapStats {
    /// Ascending; sums to 1.
    pub sorted_gaps: Vec<f64>,
    pub distinct_gap_count: usize,
    pub max_gap: f64,
}

fn sorted_reps(points: &[CirclePoint]) -> Vec<f64> {
    let mut reps: Vec<f64> = points.iter().map(|p| p.0).collect();
    reps.sort_unstable_by(f64::total_cmp);
    reps
}

/// Gaps between circularly adjacent points, including the one across `0`.
/// Gap lengths closer than `merge_tol` count as one distinct length.
pub fn gap_statistics(points: &[CirclePoint], merge_tol: f64) -> Result<GapStats> {
    if points.len() < 2 {
        return Err(Error::Domain("gap statistics need at least two points"));
    }
    let reps = sorted_reps(points);
    let mut gaps: Vec<f64> = reps.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(1.0 - (reps[reps.len() - 1] - reps[0]));
    gaps.sort_unstable_by(f64::total_cmp);

    let mut distinct = 1;
    for w in gaps.windows(2) {
        if w[1] - w[0] >= merge_tol {
            distinct += 1;
        }
    }
    let max_gap = gaps[gaps.len() - 1];
    Ok(GapStats {
        sorted_gaps: gaps,
        distinct_gap_count: distinct,
        max_gap,
    })
}

/// Number of points that remain distinct once points closer than
/// `merge_tol` (in the circle metric) are identified.
pub fn distinct_point_count(points: &[CirclePoint], merge_tol: f64) -> usize {
    if points.is_empty() {
        return 0;
    }
    let reps = sorted_reps(points);
    let mut count = 1;
    for w in reps.windows(2) {
        if w[1] - w[0] >= merge_tol {
            count += 1;
        }
    }
    // The first and last clusters touch across 0.
    if count > 1 && 1.0 - (reps[reps.len() - 1] - reps[0]) < merge_tol {
        count -= 1;
    }
    count
}

/// Star discrepancy `D*_N = sup_t |#{x_i < t}/N − t|`.
///
/// With sorted points `x_1 ≤ … ≤ x_N` the supremum is
/// `max_i max(i/N − x_i, x_i − (i−1)/N)`.
pub fn star_discrepancy(points: &[CirclePoint]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Domain("star discrepancy needs at least one point"));
    }
    let reps = sorted_reps(points);
    let n = reps.len() as f64;
    let d = reps
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let above = (i + 1) as f64 / n - x;
            let below = x - i as f64 / n;
            above.max(below)
        })
        .fold(0.0_f64, f64::max);
    Ok(d)
}
