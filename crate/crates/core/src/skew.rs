//! The skew product `F(r, [θ]) = (f(λ, r), [θ] + [ρ(λ, r)])` on `ℝ × S¹`.
//!
//! The rotation is either a constant `α` or an `r`-dependent `g(λ, r)`,
//! always evaluated at the pre-step `r`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::circle::{self, normalize, CirclePoint, DEFAULT_MAX_DENOMINATOR};
use crate::error::{Error, Result};
use crate::map1d::{MapFamily, TwoCycle};
use crate::verify::InvariantCircle;

/// Largest orbit materialized by default.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;
/// Default burn-in when starting off the cycle.
pub const DEFAULT_TRANSIENT: usize = 1_000;

/// An `r`-dependent rotation amount `g(λ, r)`.
pub trait RotationFn: Send + Sync {
    fn amount(&self, lambda: f64, r: f64) -> f64;
}

impl<G> RotationFn for G
where
    G: Fn(f64, f64) -> f64 + Send + Sync,
{
    fn amount(&self, lambda: f64, r: f64) -> f64 {
        self(lambda, r)
    }
}

#[derive(Clone)]
pub enum RotationSpec {
    /// `[θ] ↦ [θ + α]`. `diagnostic` is the rationality verdict on `α mod 1`
    /// taken when the spec was built.
    Constant {
        alpha: f64,
        diagnostic: Option<(i64, i64)>,
    },
    /// `[θ] ↦ [θ + g(λ, r)]`.
    Variable(Arc<dyn RotationFn>),
}

impl RotationSpec {
    pub fn constant(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Domain("rotation must be finite"));
        }
        Ok(RotationSpec::Constant {
            alpha,
            diagnostic: circle::rationality_diagnostic(alpha, DEFAULT_MAX_DENOMINATOR),
        })
    }

    pub fn variable<G: RotationFn + 'static>(g: G) -> Self {
        RotationSpec::Variable(Arc::new(g))
    }

    /// Rotation applied to a point whose base coordinate is `r`.
    #[inline]
    pub fn amount(&self, lambda: f64, r: f64) -> f64 {
        match self {
            RotationSpec::Constant { alpha, .. } => *alpha,
            RotationSpec::Variable(g) => g.amount(lambda, r),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, RotationSpec::Constant { .. })
    }

    /// Rotation amounts on the two circles of `cyc`, their sum, and the
    /// rationality verdict on each.
    pub fn cycle_diagnostics(&self, cyc: &TwoCycle, max_denominator: i64) -> RotationDiagnostics {
        let on_gamma1 = self.amount(cyc.lambda, cyc.r1);
        let on_gamma2 = self.amount(cyc.lambda, cyc.r2);
        let double_step = circle::wrap(on_gamma1 + on_gamma2);
        let diag = |x: f64| circle::rationality_diagnostic(x, max_denominator).map(Fraction::from);
        RotationDiagnostics {
            constant: self.is_constant(),
            on_gamma1,
            on_gamma2,
            double_step,
            gamma1_rational: diag(on_gamma1),
            gamma2_rational: diag(on_gamma2),
            double_step_rational: diag(double_step),
        }
    }
}

impl core::fmt::Debug for RotationSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RotationSpec::Constant { alpha, diagnostic } => f
                .debug_struct("Constant")
                .field("alpha", alpha)
                .field("diagnostic", diagnostic)
                .finish(),
            RotationSpec::Variable(_) => f.write_str("Variable(..)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fraction {
    pub numerator: i64,
    pub denominator: i64,
}

impl From<(i64, i64)> for Fraction {
    fn from((numerator, denominator): (i64, i64)) -> Self {
        Fraction {
            numerator,
            denominator,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RotationDiagnostics {
    pub constant: bool,
    pub on_gamma1: f64,
    pub on_gamma2: f64,
    /// `(ρ(r1) + ρ(r2)) mod 1`, the rotation of `F²` on each circle.
    pub double_step: f64,
    pub gamma1_rational: Option<Fraction>,
    pub gamma2_rational: Option<Fraction>,
    pub double_step_rational: Option<Fraction>,
}

impl RotationDiagnostics {
    pub fn any_rational(&self) -> bool {
        self.gamma1_rational.is_some()
            || self.gamma2_rational.is_some()
            || self.double_step_rational.is_some()
    }
}

/// A point `(r, [θ])`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SkewState {
    pub r: f64,
    pub theta: CirclePoint,
}

impl SkewState {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        Ok(SkewState {
            r,
            theta: normalize(theta)?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SkewSystem<F> {
    family: F,
    rotation: RotationSpec,
    lambda: f64,
    orbit_cap: usize,
}

impl<F: MapFamily> SkewSystem<F> {
    pub fn new(family: F, rotation: RotationSpec, lambda: f64) -> Result<Self> {
        let (lo, hi) = family.parameter_range();
        if !(lambda.is_finite() && lambda >= lo && lambda <= hi) {
            return Err(Error::InvalidParameter("lambda outside the family's parameter range"));
        }
        Ok(SkewSystem {
            family,
            rotation,
            lambda,
            orbit_cap: DEFAULT_ORBIT_CAP,
        })
    }

    pub fn with_orbit_cap(mut self, cap: usize) -> Self {
        self.orbit_cap = cap;
        self
    }

    pub fn family(&self) -> &F {
        &self.family
    }

    pub fn rotation(&self) -> &RotationSpec {
        &self.rotation
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn orbit_cap(&self) -> usize {
        self.orbit_cap
    }

    #[inline]
    fn advance(&self, s: SkewState) -> core::result::Result<SkewState, f64> {
        let r = self.family.eval(self.lambda, s.r);
        if !(r.is_finite() && self.family.contains(r)) {
            return Err(r);
        }
        let shift = self.rotation.amount(self.lambda, s.r);
        let theta = circle::rotate(s.theta, shift).map_err(|_| f64::NAN)?;
        Ok(SkewState { r, theta })
    }

    /// One application of `F`.
    pub fn step(&self, s: SkewState) -> Result<SkewState> {
        self.advance(s)
            .map_err(|value| Error::OrbitEscaped { index: 1, value })
    }

    /// Discards `transient` iterates, then records `n` consecutive states
    /// beginning with the post-transient one.
    pub fn orbit(&self, s0: SkewState, n: usize, transient: usize) -> Result<Vec<SkewState>> {
        if n == 0 {
            return Err(Error::InvalidParameter("orbit length must be at least 1"));
        }
        if n > self.orbit_cap {
            return Err(Error::InvalidParameter("orbit length exceeds the configured cap"));
        }
        let mut s = s0;
        for k in 1..=transient {
            s = self
                .advance(s)
                .map_err(|value| Error::OrbitEscaped { index: k, value })?;
        }
        let mut out = Vec::with_capacity(n);
        out.push(s);
        for k in 1..n {
            s = self.advance(s).map_err(|value| Error::OrbitEscaped {
                index: transient + k,
                value,
            })?;
            out.push(s);
        }
        Ok(out)
    }
}

/// Even-indexed and odd-indexed entries.
pub fn split_parity<T: Clone>(states: &[T]) -> (Vec<T>, Vec<T>) {
    let even = states.iter().step_by(2).cloned().collect();
    let odd = states.iter().skip(1).step_by(2).cloned().collect();
    (even, odd)
}

/// `(offset + k·rate) mod 1`, with the product's rounding error recovered
/// by a fused multiply-add so large `k` stays accurate.
#[inline]
fn affine_phase(offset: f64, k: f64, rate: f64) -> f64 {
    let p = k * rate;
    let err = libm::fma(k, rate, -p);
    let base = p - libm::floor(p);
    circle::wrap(circle::wrap(base + offset) + err)
}

/// Closed-form orbit of `(r1, [0])` on the invariant circles when the step
/// from `Γ¹` rotates by `on_gamma1` and the step from `Γ²` by `on_gamma2`:
/// `F^{2k}` lands at `[k(a + b)]` on `Γ¹` and `F^{2k+1}` at `[a + k(a + b)]`
/// on `Γ²`, `0 ≤ k < k_max`.
pub fn closed_form_circle_orbit(
    cyc: &TwoCycle,
    on_gamma1: f64,
    on_gamma2: f64,
    k_max: usize,
) -> Result<(InvariantCircle, InvariantCircle)> {
    if !(on_gamma1.is_finite() && on_gamma2.is_finite()) {
        return Err(Error::Domain("rotation must be finite"));
    }
    let rate = on_gamma1 + on_gamma2;
    let first = (0..k_max)
        .map(|k| CirclePoint::new(affine_phase(0.0, k as f64, rate)))
        .collect::<Result<Vec<_>>>()?;
    let second = (0..k_max)
        .map(|k| CirclePoint::new(affine_phase(on_gamma1, k as f64, rate)))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        InvariantCircle {
            r_level: cyc.r1,
            samples: first,
        },
        InvariantCircle {
            r_level: cyc.r2,
            samples: second,
        },
    ))
}

/// `{[2kα]}` on `Γ¹` and `{[(2k+1)α]}` on `Γ²` for `0 ≤ k < k_max`, without
/// iterating the map.
pub fn exact_circle_orbit(
    cyc: &TwoCycle,
    alpha: f64,
    k_max: usize,
) -> Result<(InvariantCircle, InvariantCircle)> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1"));
    }
    closed_form_circle_orbit(cyc, alpha, alpha, k_max)
}

/// Rotation of `F²` restricted to either circle: `2α` for a constant
/// rotation, `g(λ, r1) + g(λ, r2)` otherwise, reduced mod 1.
pub fn double_step_rotation<F: MapFamily>(sys: &SkewSystem<F>, cyc: &TwoCycle) -> Result<CirclePoint> {
    let rot = sys.rotation();
    normalize(rot.amount(sys.lambda(), cyc.r1) + rot.amount(sys.lambda(), cyc.r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{circle_dist, gap_statistics, GOLDEN_CONJUGATE, DEFAULT_MERGE_TOL};
    use crate::map1d::{find_two_cycle, logistic_family, Logistic, DEFAULT_ROOT_TOL};
    use alloc::vec;

    const ALPHA: f64 = 0.618_033_988_749_895;

    fn system(lambda: f64, rotation: RotationSpec) -> SkewSystem<Logistic> {
        SkewSystem::new(logistic_family(), rotation, lambda).unwrap()
    }

    fn cycle(lambda: f64) -> TwoCycle {
        find_two_cycle(&logistic_family(), lambda, DEFAULT_ROOT_TOL).unwrap()
    }

    /// Plain iteration of the logistic map.
    fn iterate(lambda: f64, mut r: f64, n: usize) -> f64 {
        for _ in 0..n {
            r = lambda * r * (1.0 - r);
        }
        r
    }

    #[test]
    fn step_examples() {
        let sys = system(3.2, RotationSpec::constant(ALPHA).unwrap());
        let s = sys.step(SkewState::new(0.513_044_509_5, 0.0).unwrap()).unwrap();
        assert!((s.r - 0.799_455_490_5).abs() < 1e-9);
        assert_eq!(s.theta.rep(), ALPHA);

        let still = system(3.2, RotationSpec::constant(0.0).unwrap());
        let s0 = SkewState::new(0.3, 0.42).unwrap();
        let s = still.step(s0).unwrap();
        assert_eq!(s.theta, s0.theta);
        assert_eq!(s.r, 3.2 * 0.3 * 0.7);

        assert!(matches!(
            sys.step(SkewState::new(1.5, 0.0).unwrap()),
            Err(Error::OrbitEscaped { index: 1, .. })
        ));
    }

    #[test]
    fn variable_rotation_uses_pre_step_r() {
        let sys = system(3.2, RotationSpec::variable(|_: f64, r: f64| r));
        let s = sys.step(SkewState::new(0.25, 0.0).unwrap()).unwrap();
        assert_eq!(s.theta.rep(), 0.25);
    }

    #[test]
    fn orbit_examples() {
        let cyc = cycle(3.2);
        let sys = system(3.2, RotationSpec::constant(ALPHA).unwrap());
        let start = SkewState::new(cyc.r1, 0.0).unwrap();
        let orb = sys.orbit(start, 4, 0).unwrap();
        let rs: Vec<f64> = orb.iter().map(|s| s.r).collect();
        for (k, (&r, &want)) in rs.iter().zip(&[cyc.r1, cyc.r2, cyc.r1, cyc.r2]).enumerate() {
            assert!((r - want).abs() < 1e-12, "k = {k}");
            let theta = normalize(k as f64 * ALPHA).unwrap();
            assert!(circle_dist(orb[k].theta, theta) < 1e-15);
        }

        let one = sys.orbit(start, 1, 0).unwrap();
        assert_eq!(one, vec![start]);

        let orb = sys.orbit(SkewState::new(0.3, 0.0).unwrap(), 2, 2000).unwrap();
        let oracle = [iterate(3.2, 0.3, 2000), iterate(3.2, 0.3, 2001)];
        for (s, o) in orb.iter().zip(oracle) {
            assert!((s.r - o).abs() < 1e-12);
            assert!((s.r - cyc.r1).abs() < 1e-8 || (s.r - cyc.r2).abs() < 1e-8);
        }

        assert!(sys.orbit(start, 0, 0).is_err());
        assert!(sys.clone().with_orbit_cap(10).orbit(start, 11, 0).is_err());
    }

    #[test]
    fn orbit_escape_carries_absolute_index() {
        let sys = system(4.0, RotationSpec::constant(ALPHA).unwrap());
        // 0.5 ↦ 1 ↦ 0 stays inside; a start above 1 leaves at once.
        let err = sys.orbit(SkewState::new(1.2, 0.0).unwrap(), 5, 3).unwrap_err();
        assert!(matches!(err, Error::OrbitEscaped { index: 1, .. }));
        let wide = SkewSystem::new(
            crate::map1d::FnFamily::new("double", (0.0, 1.0), |_, r| 2.0 * r),
            RotationSpec::constant(0.1).unwrap(),
            1.0,
        )
        .unwrap();
        // 0.1, 0.2, 0.4, 0.8, 1.6: the fourth iterate escapes.
        let err = wide.orbit(SkewState::new(0.1, 0.0).unwrap(), 5, 2).unwrap_err();
        assert!(matches!(err, Error::OrbitEscaped { index: 4, .. }), "{err:?}");
    }

    #[test]
    fn parity_split() {
        let (e, o) = split_parity(&['a', 'b', 'c', 'd']);
        assert_eq!(e, vec!['a', 'c']);
        assert_eq!(o, vec!['b', 'd']);
        let (e, o) = split_parity::<u8>(&[]);
        assert!(e.is_empty() && o.is_empty());

        let cyc = cycle(3.2);
        let sys = system(3.2, RotationSpec::constant(ALPHA).unwrap());
        let orb = sys.orbit(SkewState::new(cyc.r1, 0.0).unwrap(), 10_000, 0).unwrap();
        let (even, odd) = split_parity(&orb);
        assert!(even.iter().all(|s| (s.r - cyc.r1).abs() < 1e-8));
        assert!(odd.iter().all(|s| (s.r - cyc.r2).abs() < 1e-8));
    }

    #[test]
    fn theta_accumulates_only_additive_roundoff() {
        let cyc = cycle(3.2);
        let sys = system(3.2, RotationSpec::constant(ALPHA).unwrap());
        let orb = sys.orbit(SkewState::new(cyc.r1, 0.0).unwrap(), 10_000, 0).unwrap();
        for (k, s) in orb.iter().enumerate() {
            let want = normalize(k as f64 * ALPHA).unwrap();
            assert!(circle_dist(s.theta, want) <= (k.max(1) as f64) * 1e-15);
        }
    }

    #[test]
    fn exact_orbit_examples() {
        let cyc = cycle(3.2);
        let (g1, g2) = exact_circle_orbit(&cyc, 0.25, 2).unwrap();
        assert_eq!(g1.samples, vec![CirclePoint::ZERO, normalize(0.5).unwrap()]);
        assert_eq!(g2.samples, vec![normalize(0.25).unwrap(), normalize(0.75).unwrap()]);
        assert_eq!(g1.r_level, cyc.r1);
        assert_eq!(g2.r_level, cyc.r2);

        let (g1, g2) = exact_circle_orbit(&cyc, ALPHA, 1).unwrap();
        assert_eq!(g1.samples, vec![CirclePoint::ZERO]);
        assert_eq!(g2.samples, vec![normalize(ALPHA).unwrap()]);

        let (g1, _) = exact_circle_orbit(&cyc, ALPHA, 500).unwrap();
        let stats = gap_statistics(&g1.samples, DEFAULT_MERGE_TOL).unwrap();
        assert!(stats.distinct_gap_count <= 3);

        assert!(exact_circle_orbit(&cyc, ALPHA, 0).is_err());
    }

    #[test]
    fn exact_orbit_matches_direct_products() {
        let cyc = cycle(3.2);
        let (g1, g2) = exact_circle_orbit(&cyc, GOLDEN_CONJUGATE, 2000).unwrap();
        for k in 0..2000 {
            let even = normalize(2.0 * k as f64 * GOLDEN_CONJUGATE).unwrap();
            let odd = normalize((2 * k + 1) as f64 * GOLDEN_CONJUGATE).unwrap();
            assert!(circle_dist(g1.samples[k], even) < 1e-12);
            assert!(circle_dist(g2.samples[k], odd) < 1e-12);
        }
    }

    #[test]
    fn exact_orbit_union_is_full_rotation_orbit() {
        let cyc = cycle(3.2);
        let k_max = 300;
        let (g1, g2) = exact_circle_orbit(&cyc, ALPHA, k_max).unwrap();
        let mut merged: Vec<f64> = g1.samples.iter().chain(&g2.samples).map(|p| p.rep()).collect();
        let mut full: Vec<f64> = (0..2 * k_max)
            .map(|k| normalize(k as f64 * ALPHA).unwrap().rep())
            .collect();
        merged.sort_by(f64::total_cmp);
        full.sort_by(f64::total_cmp);
        for (a, b) in merged.iter().zip(&full) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn double_step_examples() {
        let cyc = cycle(3.2);
        let sys = system(3.2, RotationSpec::constant(0.3).unwrap());
        assert!((double_step_rotation(&sys, &cyc).unwrap().rep() - 0.6).abs() < 1e-15);

        let scaled = system(3.2, RotationSpec::variable(|_: f64, r: f64| ALPHA * (1.0 + r)));
        let rho = double_step_rotation(&scaled, &cyc).unwrap();
        let want = normalize(ALPHA * (2.0 + 4.2 / 3.2)).unwrap();
        assert!(circle_dist(rho, want) < 1e-12);
        assert!((rho.rep() - 0.047_237).abs() < 1e-6);

        let zero = system(3.2, RotationSpec::variable(|_: f64, _: f64| 0.0));
        assert_eq!(double_step_rotation(&zero, &cyc).unwrap().rep(), 0.0);
        let orb = zero.orbit(SkewState::new(cyc.r1, 0.3).unwrap(), 40, 0).unwrap();
        let (even, _) = split_parity(&orb);
        assert!(even.iter().all(|s| s.theta == even[0].theta));
    }

    #[test]
    fn measured_double_step_matches() {
        let cyc = cycle(3.2);
        let sys = system(3.2, RotationSpec::variable(|_: f64, r: f64| ALPHA * (1.0 + r)));
        let rho = double_step_rotation(&sys, &cyc).unwrap();
        let orb = sys.orbit(SkewState::new(cyc.r1, 0.0).unwrap(), 2001, 0).unwrap();
        let (even, _) = split_parity(&orb);
        for w in even.windows(2) {
            let inc = normalize(w[1].theta.rep() - w[0].theta.rep()).unwrap();
            assert!(circle_dist(inc, rho) < 1e-9);
        }
    }

    #[test]
    fn constant_g_matches_constant_spec_bitwise() {
        let constant = system(3.2, RotationSpec::constant(ALPHA).unwrap());
        let variable = system(3.2, RotationSpec::variable(|_: f64, _: f64| ALPHA));
        let s0 = SkewState::new(0.3, 0.1).unwrap();
        let a = constant.orbit(s0, 500, 0).unwrap();
        let b = variable.orbit(s0, 500, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn constant_diagnostic_is_recorded() {
        match RotationSpec::constant(1.25).unwrap() {
            RotationSpec::Constant { diagnostic, .. } => assert_eq!(diagnostic, Some((1, 4))),
            _ => unreachable!(),
        }
        match RotationSpec::constant(ALPHA).unwrap() {
            RotationSpec::Constant { diagnostic, .. } => assert_eq!(diagnostic, None),
            _ => unreachable!(),
        }
        assert!(RotationSpec::constant(f64::NAN).is_err());
    }

    #[test]
    fn system_rejects_bad_lambda() {
        let rot = RotationSpec::constant(ALPHA).unwrap();
        assert!(SkewSystem::new(logistic_family(), rot.clone(), 4.5).is_err());
        assert!(SkewSystem::new(logistic_family(), rot, f64::NAN).is_err());
    }
}
