//! One-parameter interval maps `r ↦ f(λ, r)`: fixed points, 2-cycles, their
//! multipliers, and the parameter window in which the 2-cycle attracts.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::roots::{self, Bracket};

/// Default root tolerance.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Default tolerance for locating the window edges.
pub const DEFAULT_WINDOW_TOL: f64 = 1e-6;
/// Step for first-derivative central differences.
pub const FD_STEP: f64 = 1e-5;
/// Step for second- and third-derivative differences.
pub const FD_STEP_HIGH: f64 = 1e-3;

/// Two 2-cycle roots closer than this are the same point.
const PAIRING_TOL: f64 = 1e-8;
/// Largest root uncertainty accepted, as a fraction of the cycle split.
const RESOLUTION_FRACTION: f64 = 0.1;
/// A 2-cycle with `|r1 − r2|` at or below this has merged with a fixed point.
const MIN_CYCLE_SPLIT: f64 = 1e-8;
/// λ-grid used to bracket the window edges before bisection.
const WINDOW_GRID: usize = 64;

/// A one-parameter family of maps of an interval.
pub trait MapFamily {
    fn name(&self) -> &str;

    fn eval(&self, lambda: f64, r: f64) -> f64;

    /// `∂f/∂r`. Defaults to a central difference with step [`FD_STEP`].
    fn deriv(&self, lambda: f64, r: f64) -> f64 {
        central_difference(|x| self.eval(lambda, x), r, FD_STEP)
    }

    /// Closed interval of valid `r`.
    fn domain(&self) -> (f64, f64);

    /// Parameters for which the family maps its domain sensibly.
    fn parameter_range(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn contains(&self, r: f64) -> bool {
        let (lo, hi) = self.domain();
        r >= lo && r <= hi
    }
}

impl<T: MapFamily + ?Sized> MapFamily for &T {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn eval(&self, lambda: f64, r: f64) -> f64 {
        (**self).eval(lambda, r)
    }
    fn deriv(&self, lambda: f64, r: f64) -> f64 {
        (**self).deriv(lambda, r)
    }
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn parameter_range(&self) -> (f64, f64) {
        (**self).parameter_range()
    }
}

pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// `f(λ, r) = λ r (1 − r)` on `[0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Logistic;

impl MapFamily for Logistic {
    fn name(&self) -> &str {
        "logistic"
    }

    #[inline]
    fn eval(&self, lambda: f64, r: f64) -> f64 {
        lambda * r * (1.0 - r)
    }

    #[inline]
    fn deriv(&self, lambda: f64, r: f64) -> f64 {
        lambda * (1.0 - 2.0 * r)
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn parameter_range(&self) -> (f64, f64) {
        (0.0, 4.0)
    }
}

pub fn logistic_family() -> Logistic {
    Logistic
}

type MapFn = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A family given by closures. Without an explicit derivative, `deriv`
/// falls back to a central difference.
pub struct FnFamily {
    name: String,
    domain: (f64, f64),
    eval: MapFn,
    deriv: Option<MapFn>,
}

impl FnFamily {
    pub fn new<F>(name: impl Into<String>, domain: (f64, f64), eval: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        FnFamily {
            name: name.into(),
            domain,
            eval: Box::new(eval),
            deriv: None,
        }
    }

    pub fn with_deriv<D>(mut self, deriv: D) -> Self
    where
        D: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        self.deriv = Some(Box::new(deriv));
        self
    }
}

impl core::fmt::Debug for FnFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FnFamily")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("analytic_deriv", &self.deriv.is_some())
            .finish()
    }
}

impl MapFamily for FnFamily {
    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, lambda: f64, r: f64) -> f64 {
        (self.eval)(lambda, r)
    }

    fn deriv(&self, lambda: f64, r: f64) -> f64 {
        match &self.deriv {
            Some(d) => d(lambda, r),
            None => central_difference(|x| (self.eval)(lambda, x), r, FD_STEP),
        }
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }
}

/// A pair `r1 < r2` with `f(r1) = r2` and `f(r2) = r1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoCycle {
    pub lambda: f64,
    pub r1: f64,
    pub r2: f64,
    /// `f′(r1) · f′(r2)`; the cycle attracts iff its magnitude is below 1.
    pub multiplier: f64,
    /// `max(|f(f(r1)) − r1|, |f(f(r2)) − r2|)`.
    pub residual: f64,
}

impl TwoCycle {
    /// Builds the cycle through `a` and `b` (in either order) and fills in
    /// the multiplier and residual.
    pub fn from_points<F: MapFamily + ?Sized>(fam: &F, lambda: f64, a: f64, b: f64) -> Self {
        let (r1, r2) = if a <= b { (a, b) } else { (b, a) };
        let f2 = |r: f64| fam.eval(lambda, fam.eval(lambda, r));
        let residual = libm::fabs(f2(r1) - r1).max(libm::fabs(f2(r2) - r2));
        TwoCycle {
            lambda,
            r1,
            r2,
            multiplier: fam.deriv(lambda, r1) * fam.deriv(lambda, r2),
            residual,
        }
    }

    pub fn is_attracting(&self) -> bool {
        libm::fabs(self.multiplier) < 1.0
    }

    pub fn split(&self) -> f64 {
        self.r2 - self.r1
    }
}

/// The parameter interval `(lambda_c, lambda_0)` where the 2-cycle exists
/// and attracts.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DoublingWindow {
    pub lambda_c: f64,
    pub lambda_0: f64,
}

impl DoublingWindow {
    pub fn contains(&self, lambda: f64) -> bool {
        lambda > self.lambda_c && lambda < self.lambda_0
    }
}

/// All `r` in the family domain with `f(λ, r) = r`, ascending.
pub fn find_fixed_points<F: MapFamily + ?Sized>(fam: &F, lambda: f64, tol: f64) -> Vec<f64> {
    let (lo, hi) = fam.domain();
    let h = |r: f64| fam.eval(lambda, r) - r;
    let dh = |r: f64| fam.deriv(lambda, r) - 1.0;
    let found = roots::scan(&h, lo, hi, tol)
        .into_iter()
        .map(|b| roots::polish(&h, &dh, b))
        .filter(|&r| fam.contains(r) && libm::fabs(h(r)) < tol)
        .collect();
    roots::dedup_sorted(found, 10.0 * tol)
}

/// The 2-cycle of `f(λ, ·)`.
///
/// Brackets are located on `(f(f(r)) − r) / (f(r) − r)`, whose zeros are the
/// points of exact period two, and polished by Newton on `f(f(r)) − r`.
/// Candidates within `10·tol` of a fixed point are discarded.
pub fn find_two_cycle<F: MapFamily + ?Sized>(fam: &F, lambda: f64, tol: f64) -> Result<TwoCycle> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("root tolerance must be positive"));
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter("lambda must be finite"));
    }
    let (lo, hi) = fam.domain();
    let f = |r: f64| fam.eval(lambda, r);
    let composed = |r: f64| f(f(r)) - r;
    let composed_deriv = |r: f64| fam.deriv(lambda, f(r)) * fam.deriv(lambda, r) - 1.0;
    let primitive = |r: f64| {
        let denom = f(r) - r;
        if denom == 0.0 {
            f64::NAN
        } else {
            composed(r) / denom
        }
    };

    let fixed = find_fixed_points(fam, lambda, tol);
    let near_fixed = |r: f64| fixed.iter().any(|&x| libm::fabs(r - x) < 10.0 * tol);

    let candidates: Vec<f64> = roots::scan(&primitive, lo, hi, tol)
        .into_iter()
        .map(|b| {
            let b = Bracket {
                lo: b.lo.max(lo),
                hi: b.hi.min(hi),
                estimate: b.estimate,
            };
            roots::polish(&composed, &composed_deriv, b)
        })
        .filter(|&r| fam.contains(r) && libm::fabs(composed(r)) < tol && !near_fixed(r))
        .collect();
    let candidates = roots::dedup_sorted(candidates, 10.0 * tol);

    let mut used = alloc::vec![false; candidates.len()];
    let mut cycles: Vec<TwoCycle> = Vec::new();
    for i in 0..candidates.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let a = candidates[i];
        let image = f(a);
        let partner = (0..candidates.len())
            .filter(|&j| !used[j])
            .find(|&j| libm::fabs(candidates[j] - image) < PAIRING_TOL);
        let b = match partner {
            Some(j) => {
                used[j] = true;
                candidates[j]
            }
            None => image,
        };
        if libm::fabs(a - b) <= MIN_CYCLE_SPLIT || !fam.contains(b) {
            continue;
        }
        let cycle = TwoCycle::from_points(fam, lambda, a, b);
        // A residual of `tol` moves a root by about tol / |1 - multiplier|;
        // near a flip that can exceed the split itself.
        let resolved = tol < RESOLUTION_FRACTION * cycle.split() * libm::fabs(1.0 - cycle.multiplier);
        if cycle.residual < tol && resolved {
            cycles.push(cycle);
        }
    }

    match cycles.len() {
        0 => Err(Error::NoTwoCycle { lambda }),
        1 => Ok(cycles[0]),
        _ => Err(Error::AmbiguousCycles(cycles)),
    }
}

pub fn cycle_multiplier<F: MapFamily + ?Sized>(fam: &F, cyc: &TwoCycle) -> f64 {
    fam.deriv(cyc.lambda, cyc.r1) * fam.deriv(cyc.lambda, cyc.r2)
}

/// Locates the parameter where the 2-cycle is born (`lambda_c`) and where it
/// loses stability (`lambda_0`) inside `[lambda_lo, lambda_hi]`.
///
/// Both edges are bracketed on a uniform λ-grid and then bisected to `tol`.
pub fn doubling_window<F: MapFamily + ?Sized>(
    fam: &F,
    lambda_lo: f64,
    lambda_hi: f64,
    tol: f64,
) -> Result<DoublingWindow> {
    if !(lambda_lo.is_finite() && lambda_hi.is_finite() && lambda_lo < lambda_hi) {
        return Err(Error::InvalidParameter("lambda range must satisfy lo < hi"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("window tolerance must be positive"));
    }
    let not_found = Error::WindowNotFound {
        lo: lambda_lo,
        hi: lambda_hi,
    };
    let cycle_at = |lambda: f64| find_two_cycle(fam, lambda, DEFAULT_ROOT_TOL).ok();
    let stable_at = |lambda: f64| cycle_at(lambda).is_some_and(|c| c.is_attracting());

    let step = (lambda_hi - lambda_lo) / WINDOW_GRID as f64;
    let grid: Vec<f64> = (0..=WINDOW_GRID)
        .map(|i| if i == WINDOW_GRID { lambda_hi } else { lambda_lo + step * i as f64 })
        .collect();
    let exists: Vec<bool> = grid.iter().map(|&l| cycle_at(l).is_some()).collect();

    let born = exists.iter().position(|&e| e).ok_or(not_found.clone())?;
    let lambda_c = if born == 0 {
        lambda_lo
    } else {
        bisect_predicate(grid[born - 1], grid[born], tol, |l| cycle_at(l).is_some())
    };

    let stable = (born..grid.len())
        .find(|&i| stable_at(grid[i]))
        .ok_or(not_found.clone())?;
    let lost = (stable + 1..grid.len())
        .find(|&i| !stable_at(grid[i]))
        .ok_or(not_found)?;
    let lambda_0 = bisect_predicate(grid[lost - 1], grid[lost], tol, |l| !stable_at(l));

    Ok(DoublingWindow { lambda_c, lambda_0 })
}

/// Bisects `[a, b]` (predicate false at `a`, true at `b`) down to `tol`.
fn bisect_predicate<P: Fn(f64) -> bool>(mut a: f64, mut b: f64, tol: f64, pred: P) -> f64 {
    while b - a > tol {
        let m = 0.5 * (a + b);
        if pred(m) {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

/// Steps and pass thresholds for [`check_doubling_condition`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionOptions {
    /// λ-step for the transversality difference.
    pub h: f64,
    /// r-step for second and third derivatives.
    pub h_high: f64,
    pub derivative_tol: f64,
    pub min_transversality: f64,
    pub min_nondegeneracy: f64,
    pub root_tol: f64,
}

impl Default for ConditionOptions {
    fn default() -> Self {
        ConditionOptions {
            h: FD_STEP,
            h_high: FD_STEP_HIGH,
            derivative_tol: 1e-6,
            min_transversality: 1e-6,
            min_nondegeneracy: 1e-6,
            root_tol: DEFAULT_ROOT_TOL,
        }
    }
}

/// The flip-bifurcation conditions evaluated at one fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionReport {
    pub lambda_c: f64,
    pub fixed_point: f64,
    /// `|f′(λ_c, x*) + 1|`.
    pub derivative_defect: f64,
    pub derivative_ok: bool,
    /// `d/dλ (f²)′(λ, x*(λ))` at `λ_c`.
    pub transversality: f64,
    pub transversality_ok: bool,
    /// `−2 f‴(x*) − 3 f″(x*)²`.
    pub nondegeneracy: f64,
    pub nondegeneracy_ok: bool,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.derivative_ok && self.transversality_ok && self.nondegeneracy_ok
    }
}

/// Checks, at the fixed point whose derivative is closest to −1, that the
/// derivative equals −1, that the 2-step multiplier crosses transversally in
/// λ, and that the cubic coefficient is nonzero.
pub fn check_doubling_condition<F: MapFamily + ?Sized>(
    fam: &F,
    lambda_c: f64,
    opts: &ConditionOptions,
) -> Result<ConditionReport> {
    if !(opts.h > 0.0 && opts.h_high > 0.0) {
        return Err(Error::InvalidParameter("finite-difference steps must be positive"));
    }
    let flip_defect = |lambda: f64, x: f64| libm::fabs(fam.deriv(lambda, x) + 1.0);
    let fixed = find_fixed_points(fam, lambda_c, opts.root_tol);
    let x_star = fixed
        .iter()
        .copied()
        .min_by(|&a, &b| flip_defect(lambda_c, a).total_cmp(&flip_defect(lambda_c, b)))
        .ok_or(Error::NoFixedPoint { lambda: lambda_c })?;

    let nearest_fixed = |lambda: f64| -> Result<f64> {
        find_fixed_points(fam, lambda, opts.root_tol)
            .into_iter()
            .min_by(|a, b| libm::fabs(a - x_star).total_cmp(&libm::fabs(b - x_star)))
            .ok_or(Error::NoFixedPoint { lambda })
    };
    let two_step_multiplier = |lambda: f64, x: f64| {
        fam.deriv(lambda, fam.eval(lambda, x)) * fam.deriv(lambda, x)
    };
    let up = lambda_c + opts.h;
    let down = lambda_c - opts.h;
    let transversality = (two_step_multiplier(up, nearest_fixed(up)?)
        - two_step_multiplier(down, nearest_fixed(down)?))
        / (2.0 * opts.h);

    let f = |r: f64| fam.eval(lambda_c, r);
    let h = opts.h_high;
    let x = x_star;
    let second = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    let third = (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h);
    let nondegeneracy = -2.0 * third - 3.0 * second * second;

    let derivative_defect = flip_defect(lambda_c, x_star);
    Ok(ConditionReport {
        lambda_c,
        fixed_point: x_star,
        derivative_defect,
        derivative_ok: derivative_defect < opts.derivative_tol,
        transversality,
        transversality_ok: libm::fabs(transversality) > opts.min_transversality,
        nondegeneracy,
        nondegeneracy_ok: libm::fabs(nondegeneracy) > opts.min_nondegeneracy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const SQRT6: f64 = 2.449_489_742_783_178;

    /// Closed-form logistic 2-cycle `(λ+1 ∓ √((λ−3)(λ+1))) / (2λ)`.
    fn closed_form(lambda: f64) -> (f64, f64) {
        let s = ((lambda - 3.0) * (lambda + 1.0)).sqrt();
        ((lambda + 1.0 - s) / (2.0 * lambda), (lambda + 1.0 + s) / (2.0 * lambda))
    }

    /// Independent oracle: dense bisection on f²(r) − r, ignoring fixed points.
    fn oracle_two_cycle(lambda: f64) -> Vec<f64> {
        let f = |r: f64| lambda * r * (1.0 - r);
        let g = |r: f64| f(f(r)) - r;
        let fixed = [0.0, 1.0 - 1.0 / lambda];
        let n = 200_000;
        let mut out = Vec::new();
        for i in 0..n {
            let (mut a, mut b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            let (mut ga, gb) = (g(a), g(b));
            if ga * gb >= 0.0 {
                continue;
            }
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let gm = g(m);
                if (gm < 0.0) == (ga < 0.0) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            let r = 0.5 * (a + b);
            if fixed.iter().all(|x| (r - x).abs() > 1e-6) {
                out.push(r);
            }
        }
        out
    }

    #[test]
    fn logistic_examples() {
        let fam = logistic_family();
        assert!((fam.eval(3.2, 0.5) - 0.8).abs() < 1e-15);
        for l in [0.5, 1.0, 3.7] {
            assert_eq!(fam.eval(l, 0.0), 0.0);
        }
        assert!((fam.deriv(3.0, 2.0 / 3.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_derivative_matches_difference() {
        let fam = logistic_family();
        for i in 0..50 {
            let lambda = 0.5 + 3.5 * (i as f64 / 49.0);
            let r = 0.013 + 0.97 * ((i * 37 % 50) as f64 / 49.0);
            let fd = central_difference(|x| fam.eval(lambda, x), r, FD_STEP);
            assert!((fam.deriv(lambda, r) - fd).abs() < 1e-9);
        }
    }

    #[test]
    fn fixed_point_examples() {
        let fam = logistic_family();
        let fp = find_fixed_points(&fam, 3.2, DEFAULT_ROOT_TOL);
        assert_eq!(fp.len(), 2);
        assert_eq!(fp[0], 0.0);
        assert!((fp[1] - 0.6875).abs() < 1e-13);
        assert_eq!(find_fixed_points(&fam, 0.5, DEFAULT_ROOT_TOL), vec![0.0]);
        assert_eq!(find_fixed_points(&fam, 1.0, DEFAULT_ROOT_TOL), vec![0.0]);
    }

    #[test]
    fn two_cycle_at_3_2() {
        let fam = logistic_family();
        let cyc = find_two_cycle(&fam, 3.2, DEFAULT_ROOT_TOL).unwrap();
        let oracle = oracle_two_cycle(3.2);
        assert_eq!(oracle.len(), 2);
        let (c1, c2) = closed_form(3.2);
        assert!((oracle[0] - c1).abs() < 1e-12 && (oracle[1] - c2).abs() < 1e-12);
        assert!((cyc.r1 - 0.513_044_509_5).abs() < 1e-10);
        assert!((cyc.r2 - 0.799_455_490_5).abs() < 1e-10);
        assert!((cyc.r1 - oracle[0]).abs() < 1e-12);
        assert!((cyc.r2 - oracle[1]).abs() < 1e-12);
        assert!(cyc.residual < 1e-12);
        assert!(cyc.r1 < cyc.r2);

        let direct = fam.deriv(3.2, oracle[0]) * fam.deriv(3.2, oracle[1]);
        assert!((direct - 0.16).abs() < 1e-10);
        assert!((cyc.multiplier - 0.16).abs() < 1e-10);
        assert!((cycle_multiplier(&fam, &cyc) - 0.16).abs() < 1e-10);
    }

    #[test]
    fn no_two_cycle_below_three() {
        let fam = logistic_family();
        assert!(oracle_two_cycle(2.9).is_empty());
        assert_eq!(
            find_two_cycle(&fam, 2.9, DEFAULT_ROOT_TOL),
            Err(Error::NoTwoCycle { lambda: 2.9 })
        );
        assert!(find_two_cycle(&fam, 2.999_999, DEFAULT_ROOT_TOL).is_err());
        // The flip point itself: f∘f − id has a triple root at 2/3.
        assert!(find_two_cycle(&fam, 3.0, DEFAULT_ROOT_TOL).is_err());
        assert!(find_two_cycle(&fam, 3.2, 0.0).is_err());
    }

    #[test]
    fn multiplier_limits() {
        let fam = logistic_family();
        let mut prev = f64::NEG_INFINITY;
        for k in 1..=6 {
            let lambda = 3.0 + 10f64.powi(-k);
            let m = find_two_cycle(&fam, lambda, DEFAULT_ROOT_TOL).unwrap().multiplier;
            assert!(m < 1.0 && m > prev, "k = {k}: m = {m}");
            prev = m;
        }
        assert!(1.0 - prev < 1e-5);

        let edge = 1.0 + SQRT6;
        let cyc = find_two_cycle(&fam, edge, DEFAULT_ROOT_TOL).unwrap();
        assert!((cyc.multiplier + 1.0).abs() < 1e-9);
    }

    #[test]
    fn multiplier_is_symmetric() {
        let fam = logistic_family();
        let cyc = find_two_cycle(&fam, 3.3, DEFAULT_ROOT_TOL).unwrap();
        let swapped = fam.deriv(3.3, cyc.r2) * fam.deriv(3.3, cyc.r1);
        assert_eq!(swapped, cycle_multiplier(&fam, &cyc));
    }

    #[test]
    fn window_examples() {
        let fam = logistic_family();
        let w = doubling_window(&fam, 2.5, 3.6, DEFAULT_WINDOW_TOL).unwrap();
        assert!((w.lambda_c - 3.0).abs() < 1e-6, "{w:?}");
        assert!((w.lambda_0 - (1.0 + SQRT6)).abs() < 1e-6, "{w:?}");
        assert!(matches!(
            doubling_window(&fam, 2.0, 2.9, DEFAULT_WINDOW_TOL),
            Err(Error::WindowNotFound { .. })
        ));
        assert!(matches!(
            doubling_window(&fam, 3.6, 2.5, DEFAULT_WINDOW_TOL),
            Err(Error::InvalidParameter(_))
        ));
        assert!(doubling_window(&fam, 3.0, 3.0, DEFAULT_WINDOW_TOL).is_err());
    }

    #[test]
    fn window_is_monotone() {
        let fam = logistic_family();
        let w = DoublingWindow {
            lambda_c: 3.0,
            lambda_0: 1.0 + SQRT6,
        };
        for i in 1..40 {
            let lambda = w.lambda_c + (w.lambda_0 - w.lambda_c) * i as f64 / 40.0;
            assert!(w.contains(lambda));
            assert!(find_two_cycle(&fam, lambda, DEFAULT_ROOT_TOL).unwrap().is_attracting());
        }
        let outside = find_two_cycle(&fam, w.lambda_0 + 1e-4, DEFAULT_ROOT_TOL).unwrap();
        assert!(outside.multiplier.abs() > 1.0);
    }

    #[test]
    fn condition_at_three() {
        let fam = logistic_family();
        let rep = check_doubling_condition(&fam, 3.0, &ConditionOptions::default()).unwrap();
        assert!((rep.fixed_point - 2.0 / 3.0).abs() < 1e-12);
        assert!(rep.derivative_defect < 1e-9);
        // (f²)′ at the fixed point is (2 − λ)², so its λ-derivative at 3 is 2.
        assert!((rep.transversality - 2.0).abs() < 1e-6);
        // f‴ = 0 and f″ = −2λ give −12λ².
        assert!((rep.nondegeneracy + 108.0).abs() < 1e-4);
        assert!(rep.passed());
    }

    #[test]
    fn condition_fails_off_bifurcation() {
        let fam = logistic_family();
        let rep = check_doubling_condition(&fam, 2.5, &ConditionOptions::default()).unwrap();
        assert!((rep.fixed_point - 0.6).abs() < 1e-12);
        assert!((rep.derivative_defect - 0.5).abs() < 1e-12);
        assert!(!rep.derivative_ok);
        assert!(!rep.passed());
    }

    #[test]
    fn condition_fails_for_linear_family() {
        let fam = FnFamily::new("linear", (-1.0, 1.0), |l, r| l * r);
        let rep = check_doubling_condition(&fam, -1.0, &ConditionOptions::default()).unwrap();
        assert_eq!(rep.fixed_point, 0.0);
        assert!(rep.derivative_ok);
        assert_eq!(rep.nondegeneracy, 0.0);
        assert!(!rep.nondegeneracy_ok);
        assert!(!rep.passed());
    }

    #[test]
    fn condition_without_fixed_point() {
        let fam = FnFamily::new("shift", (0.0, 1.0), |_, r| r + 0.5);
        assert!(matches!(
            check_doubling_condition(&fam, 1.0, &ConditionOptions::default()),
            Err(Error::NoFixedPoint { .. })
        ));
    }
}
