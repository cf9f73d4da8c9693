//! Numerical certificates for the invariant double circle
//! `Γ¹ = {r1} × S¹`, `Γ² = {r2} × S¹`.
//!
//! Set equalities are certified through level-set `r`-deviation plus
//! exactness of the rotation in `θ`. Density is certified at a finite `ε`
//! by an `ε`-net test on the parity classes of the orbit of `(r1, [0])`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circle::{
    self, circle_dist, distinct_point_count, gap_statistics, normalize, star_discrepancy,
    CirclePoint, DEFAULT_MAX_DENOMINATOR, DEFAULT_MERGE_TOL,
};
use crate::error::{Error, RationalRotationDetail, Result};
use crate::map1d::{MapFamily, TwoCycle};
use crate::skew::{
    closed_form_circle_orbit, double_step_rotation, split_parity, Fraction, RotationDiagnostics,
    SkewState, SkewSystem,
};

/// One of the two level circles with the `θ`-coordinates attributed to it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InvariantCircle {
    pub r_level: f64,
    pub samples: Vec<CirclePoint>,
}

/// A pass/fail verdict with the measured quantity behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub passed: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NetCheck {
    pub passed: bool,
    pub max_gap: f64,
    pub eps: f64,
}

/// `F(Γ^from) = Γ^to`, both inclusions.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SwapDirection {
    pub passed: bool,
    /// Largest `|r − r_to|` over images and constructed preimages.
    pub max_r_deviation: f64,
    /// Largest `θ` error of images against the exact rotation and of
    /// constructed preimages against their targets.
    pub max_theta_deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SwapReport {
    /// `F(Γ¹) = Γ²`.
    pub forward: SwapDirection,
    /// `F(Γ²) = Γ¹`.
    pub backward: SwapDirection,
}

impl SwapReport {
    pub fn passed(&self) -> bool {
        self.forward.passed && self.backward.passed
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnionCheck {
    pub passed: bool,
    /// Largest distance in `r` from an image to `{r1, r2}`.
    pub max_r_deviation: f64,
    pub swaps_passed: bool,
}

/// `F²(Γ^i) = Γ^i` for one circle.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct F2Check {
    pub passed: bool,
    pub max_r_deviation: f64,
    /// `θ`-displacement of the first sample after two steps.
    pub theta_displacement: f64,
    /// Largest deviation of any sample's displacement from the expected
    /// double-step rotation.
    pub max_theta_deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct F2Report {
    pub gamma1: F2Check,
    pub gamma2: F2Check,
    pub double_step_rotation: f64,
}

/// ε-net statistics for one parity class.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CircleDensity {
    pub passed: bool,
    pub eps: f64,
    pub max_gap: f64,
    pub distinct_gap_count: usize,
    pub star_discrepancy: f64,
    /// Points examined when the statistics were taken.
    pub points_used: usize,
    /// Smallest `k` on the doubling schedule whose first `k` points form an
    /// ε-net, if any up to `k_max`.
    pub achieving_k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityReport {
    pub gamma1: CircleDensity,
    pub gamma2: CircleDensity,
    pub double_step_rotation: f64,
    /// Largest `θ` disagreement between a simulated orbit of `F` from
    /// `(r1, [0])` and the closed-form circle orbit.
    pub simulated_theta_deviation: f64,
    /// Largest `r` disagreement of the same simulated orbit from the
    /// parity-assigned circle level.
    pub simulated_r_deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityOptions {
    pub eps: f64,
    pub k_max: usize,
    pub merge_tol: f64,
    pub max_denominator: i64,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            eps: 1e-3,
            k_max: 100_000,
            merge_tol: DEFAULT_MERGE_TOL,
            max_denominator: DEFAULT_MAX_DENOMINATOR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AttractionReport {
    pub passed: bool,
    pub fraction: f64,
    pub converged: usize,
    pub n_starts: usize,
    pub transient: usize,
    pub tol: f64,
    pub seed: u64,
    pub min_fraction: f64,
}

/// Settings for [`verify_system`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerifyConfig {
    pub n_samples: usize,
    pub tol: f64,
    pub disjoint_delta: f64,
    pub density: DensityOptions,
    pub attraction_starts: usize,
    pub attraction_transient: usize,
    pub attraction_tol: f64,
    pub min_attraction: f64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_samples: 512,
            tol: 1e-9,
            disjoint_delta: 1e-6,
            density: DensityOptions::default(),
            attraction_starts: 100,
            attraction_transient: 10_000,
            attraction_tol: 1e-6,
            min_attraction: 0.95,
            seed: 1,
        }
    }
}

/// Every certificate for one system and cycle.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub lambda: f64,
    pub cycle: TwoCycle,
    pub rotation: RotationDiagnostics,
    /// Rationality of the rotation applied on `Γ¹` (`α` itself when the
    /// rotation is constant).
    pub alpha_diagnostic: Option<Fraction>,
    pub disjoint: Check,
    pub swap_forward: SwapDirection,
    pub swap_backward: SwapDirection,
    pub f2_gamma1: F2Check,
    pub f2_gamma2: F2Check,
    /// Whether `F²` carries each circle onto the other. This is false
    /// whenever the circles are distinct; it is reported for visibility and
    /// does not enter [`VerificationReport::all_passed`].
    pub f2_swap: Check,
    pub union_invariant: UnionCheck,
    pub density_gamma1: Option<CircleDensity>,
    pub density_gamma2: Option<CircleDensity>,
    pub density_detail: Option<DensityReport>,
    pub rational_rotation: Option<RationalRotationDetail>,
    pub attraction: AttractionReport,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        let density = |d: &Option<CircleDensity>| d.is_some_and(|d| d.passed);
        self.disjoint.passed
            && self.swap_forward.passed
            && self.swap_backward.passed
            && self.f2_gamma1.passed
            && self.f2_gamma2.passed
            && self.union_invariant.passed
            && self.rational_rotation.is_none()
            && density(&self.density_gamma1)
            && density(&self.density_gamma2)
            && self.attraction.passed
    }
}

/// Passes iff every circular gap of `points` is shorter than `eps`.
pub fn epsilon_net_check(points: &[CirclePoint], eps: f64) -> Result<NetCheck> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive"));
    }
    let stats = gap_statistics(points, DEFAULT_MERGE_TOL)?;
    Ok(NetCheck {
        passed: stats.max_gap < eps,
        max_gap: stats.max_gap,
        eps,
    })
}

/// The circles are level sets, so they are disjoint iff `r1 ≠ r2`.
pub fn disjointness_check(cyc: &TwoCycle, delta: f64) -> Check {
    let margin = libm::fabs(cyc.r2 - cyc.r1);
    Check {
        passed: margin > delta,
        margin,
    }
}

fn equispaced(n: usize) -> impl Iterator<Item = CirclePoint> {
    (0..n).map(move |j| normalize(j as f64 / n as f64).unwrap_or_default())
}

fn swap_direction<F: MapFamily>(
    sys: &SkewSystem<F>,
    from: f64,
    to: f64,
    n: usize,
    tol: f64,
) -> SwapDirection {
    let shift = sys.rotation().amount(sys.lambda(), from);
    let mut max_r = 0.0_f64;
    let mut max_theta = 0.0_f64;
    let mut record = |image: Result<SkewState>, expected: Result<CirclePoint>| match (image, expected) {
        (Ok(s), Ok(want)) => {
            max_r = max_r.max(libm::fabs(s.r - to));
            max_theta = max_theta.max(circle_dist(s.theta, want));
        }
        _ => {
            max_r = f64::INFINITY;
            max_theta = f64::INFINITY;
        }
    };

    // F(Γ^from) ⊂ Γ^to.
    for theta in equispaced(n) {
        let image = sys.step(SkewState { r: from, theta });
        record(image, theta.rotate(shift));
    }
    // Γ^to ⊂ F(Γ^from): every target has a constructed preimage.
    for target in equispaced(n) {
        let image = target
            .rotate(-shift)
            .and_then(|pre| sys.step(SkewState { r: from, theta: pre }));
        record(image, Ok(target));
    }

    SwapDirection {
        passed: max_r < tol && max_theta < tol,
        max_r_deviation: max_r,
        max_theta_deviation: max_theta,
    }
}

/// `F(Γ¹) = Γ²` and `F(Γ²) = Γ¹`, each checked as two inclusions on
/// `n_samples` equispaced angles.
pub fn swap_invariance_check<F: MapFamily>(
    sys: &SkewSystem<F>,
    cyc: &TwoCycle,
    n_samples: usize,
    tol: f64,
) -> SwapReport {
    SwapReport {
        forward: swap_direction(sys, cyc.r1, cyc.r2, n_samples, tol),
        backward: swap_direction(sys, cyc.r2, cyc.r1, n_samples, tol),
    }
}

/// `F(Γ¹ ∪ Γ²) = Γ¹ ∪ Γ²`.
pub fn union_invariance_check<F: MapFamily>(
    sys: &SkewSystem<F>,
    cyc: &TwoCycle,
    n_samples: usize,
    tol: f64,
) -> UnionCheck {
    let mut max_r = 0.0_f64;
    for level in [cyc.r1, cyc.r2] {
        for theta in equispaced(n_samples) {
            let dev = match sys.step(SkewState { r: level, theta }) {
                Ok(s) => libm::fabs(s.r - cyc.r1).min(libm::fabs(s.r - cyc.r2)),
                Err(_) => f64::INFINITY,
            };
            max_r = max_r.max(dev);
        }
    }
    let swaps_passed = swap_invariance_check(sys, cyc, n_samples, tol).passed();
    UnionCheck {
        passed: max_r < tol && swaps_passed,
        max_r_deviation: max_r,
        swaps_passed,
    }
}

fn f2_circle<F: MapFamily>(
    sys: &SkewSystem<F>,
    level: f64,
    rho: CirclePoint,
    n: usize,
    tol: f64,
) -> F2Check {
    let mut max_r = 0.0_f64;
    let mut max_theta = 0.0_f64;
    let mut first_displacement = f64::NAN;
    for theta in equispaced(n.max(1)) {
        let twice = sys
            .step(SkewState { r: level, theta })
            .and_then(|s| sys.step(s));
        match twice {
            Ok(s) => {
                max_r = max_r.max(libm::fabs(s.r - level));
                let disp = circle::wrap(s.theta.rep() - theta.rep());
                if first_displacement.is_nan() {
                    first_displacement = disp;
                }
                max_theta = max_theta.max(circle_dist(s.theta, theta.rotate(rho.rep()).unwrap_or_default()));
            }
            Err(_) => {
                max_r = f64::INFINITY;
                max_theta = f64::INFINITY;
            }
        }
    }
    F2Check {
        passed: max_r < tol && max_theta < tol,
        max_r_deviation: max_r,
        theta_displacement: first_displacement,
        max_theta_deviation: max_theta,
    }
}

/// `F²(Γ^i) = Γ^i` with `θ` advanced by the double-step rotation.
pub fn f2_invariance_check<F: MapFamily>(
    sys: &SkewSystem<F>,
    cyc: &TwoCycle,
    n_samples: usize,
    tol: f64,
) -> Result<F2Report> {
    let rho = double_step_rotation(sys, cyc)?;
    Ok(F2Report {
        gamma1: f2_circle(sys, cyc.r1, rho, n_samples, tol),
        gamma2: f2_circle(sys, cyc.r2, rho, n_samples, tol),
        double_step_rotation: rho.rep(),
    })
}

/// Whether `F²` carries `Γ¹` into `Γ²` and `Γ²` into `Γ¹`. The margin is the
/// largest `r`-distance from the other level.
pub fn f2_swap_check<F: MapFamily>(
    sys: &SkewSystem<F>,
    cyc: &TwoCycle,
    n_samples: usize,
    tol: f64,
) -> Check {
    let mut margin = 0.0_f64;
    for (from, to) in [(cyc.r1, cyc.r2), (cyc.r2, cyc.r1)] {
        for theta in equispaced(n_samples.max(1)) {
            let dev = match sys.step(SkewState { r: from, theta }).and_then(|s| sys.step(s)) {
                Ok(s) => libm::fabs(s.r - to),
                Err(_) => f64::INFINITY,
            };
            margin = margin.max(dev);
        }
    }
    Check {
        passed: margin < tol,
        margin,
    }
}

fn circle_density(samples: &[CirclePoint], opts: &DensityOptions) -> Result<CircleDensity> {
    let mut k = 2usize.min(samples.len());
    let mut achieving = None;
    loop {
        let net = epsilon_net_check(&samples[..k], opts.eps)?;
        if net.passed {
            achieving = Some(k);
            break;
        }
        if k >= samples.len() {
            break;
        }
        k = (2 * k).min(samples.len());
    }
    let prefix = &samples[..k];
    let stats = gap_statistics(prefix, opts.merge_tol)?;
    Ok(CircleDensity {
        passed: achieving.is_some(),
        eps: opts.eps,
        max_gap: stats.max_gap,
        distinct_gap_count: stats.distinct_gap_count,
        star_discrepancy: star_discrepancy(prefix)?,
        points_used: k,
        achieving_k: achieving,
    })
}

/// ε-net certificate for both parity classes of the orbit of `(r1, [0])`.
///
/// The parity classes are taken in closed form: `F^{2k}` sits at
/// `[k(ρ₁ + ρ₂)]` on `Γ¹` and `F^{2k+1}` at `[ρ₁ + k(ρ₁ + ρ₂)]` on `Γ²`, where
/// `ρᵢ` is the rotation applied from `Γⁱ`. A simulated orbit of `F` is run
/// alongside and its disagreement with the closed form is reported.
///
/// Returns [`Error::RationalRotation`] when the double-step rotation is
/// rational with a period too short for an ε-net to exist.
pub fn density_certificate<F: MapFamily>(
    sys: &SkewSystem<F>,
    cyc: &TwoCycle,
    opts: &DensityOptions,
) -> Result<DensityReport> {
    if !(opts.eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive"));
    }
    if opts.k_max < 2 {
        return Err(Error::InvalidParameter("k_max must be at least 2"));
    }
    let rot = sys.rotation();
    let on_gamma1 = rot.amount(sys.lambda(), cyc.r1);
    let on_gamma2 = rot.amount(sys.lambda(), cyc.r2);
    let rho = double_step_rotation(sys, cyc)?;

    // Fewer than ⌊1/ε⌋ + 1 points cannot have every gap below ε.
    let required = libm::floor(1.0 / opts.eps) as usize + 1;
    if let Some((p, q)) = circle::rationality_diagnostic(rho.rep(), opts.max_denominator) {
        if (q as usize) < required {
            let k = opts.k_max.min(required.max(2));
            let (g1, g2) = closed_form_circle_orbit(cyc, on_gamma1, on_gamma2, k)?;
            return Err(Error::RationalRotation(RationalRotationDetail {
                rotation: rho.rep(),
                numerator: p,
                denominator: q,
                required_points: required,
                distinct_points_gamma1: distinct_point_count(&g1.samples, opts.merge_tol),
                distinct_points_gamma2: distinct_point_count(&g2.samples, opts.merge_tol),
            }));
        }
    }

    let (g1, g2) = closed_form_circle_orbit(cyc, on_gamma1, on_gamma2, opts.k_max)?;
    let (sim_theta, sim_r) = simulated_deviation(sys, cyc, &g1, &g2);

    Ok(DensityReport {
        gamma1: circle_density(&g1.samples, opts)?,
        gamma2: circle_density(&g2.samples, opts)?,
        double_step_rotation: rho.rep(),
        simulated_theta_deviation: sim_theta,
        simulated_r_deviation: sim_r,
    })
}

fn simulated_deviation<F: MapFamily>(
    sys: &SkewSystem<F>,
    cyc: &TwoCycle,
    g1: &InvariantCircle,
    g2: &InvariantCircle,
) -> (f64, f64) {
    let n = (2 * g1.samples.len()).min(sys.orbit_cap());
    let start = SkewState {
        r: cyc.r1,
        theta: CirclePoint::ZERO,
    };
    let Ok(orbit) = sys.orbit(start, n, 0) else {
        return (f64::INFINITY, f64::INFINITY);
    };
    let (even, odd) = split_parity(&orbit);
    let mut theta_dev = 0.0_f64;
    let mut r_dev = 0.0_f64;
    for (states, circle) in [(&even, g1), (&odd, g2)] {
        for (s, want) in states.iter().zip(&circle.samples) {
            theta_dev = theta_dev.max(circle_dist(s.theta, *want));
            r_dev = r_dev.max(libm::fabs(s.r - circle.r_level));
        }
    }
    (theta_dev, r_dev)
}

/// Deterministic random starts: `r` uniform in the open domain, `θ` uniform.
pub fn attraction_starts<F: MapFamily>(sys: &SkewSystem<F>, n: usize, seed: u64) -> Vec<SkewState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = sys.family().domain();
    (0..n)
        .map(|_| {
            let u = loop {
                let u: f64 = rng.gen();
                if u > 0.0 {
                    break u;
                }
            };
            let theta: f64 = rng.gen();
            SkewState {
                r: lo + (hi - lo) * u,
                theta: normalize(theta).unwrap_or_default(),
            }
        })
        .collect()
}

/// Number of `starts` whose `r` lies within `tol` of `{r1, r2}` after
/// `transient` steps. Escaping orbits do not count.
pub fn count_attracted<F: MapFamily>(
    sys: &SkewSystem<F>,
    cyc: &TwoCycle,
    starts: &[SkewState],
    transient: usize,
    tol: f64,
) -> usize {
    starts
        .iter()
        .filter(|&&s0| {
            let mut s = s0;
            for _ in 0..transient {
                match sys.step(s) {
                    Ok(next) => s = next,
                    Err(_) => return false,
                }
            }
            libm::fabs(s.r - cyc.r1) < tol || libm::fabs(s.r - cyc.r2) < tol
        })
        .count()
}

/// Fraction of seeded random starts that settle onto the double circle.
pub fn attraction_check<F: MapFamily>(
    sys: &SkewSystem<F>,
    cyc: &TwoCycle,
    n_starts: usize,
    transient: usize,
    tol: f64,
    seed: u64,
) -> Result<f64> {
    if n_starts == 0 {
        return Err(Error::InvalidParameter("n_starts must be at least 1"));
    }
    let starts = attraction_starts(sys, n_starts, seed);
    Ok(count_attracted(sys, cyc, &starts, transient, tol) as f64 / n_starts as f64)
}

/// Runs every certificate.
pub fn verify_system<F: MapFamily>(
    sys: &SkewSystem<F>,
    cyc: &TwoCycle,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    if cfg.n_samples == 0 || !(cfg.tol > 0.0) || !(cfg.disjoint_delta > 0.0) {
        return Err(Error::InvalidParameter("sample count and tolerances must be positive"));
    }
    let rotation = sys
        .rotation()
        .cycle_diagnostics(cyc, cfg.density.max_denominator);
    let swap = swap_invariance_check(sys, cyc, cfg.n_samples, cfg.tol);
    let f2 = f2_invariance_check(sys, cyc, cfg.n_samples, cfg.tol)?;

    let (density_gamma1, density_gamma2, density_detail, rational_rotation) =
        match density_certificate(sys, cyc, &cfg.density) {
            Ok(d) => (Some(d.gamma1), Some(d.gamma2), Some(d), None),
            Err(Error::RationalRotation(detail)) => (None, None, None, Some(detail)),
            Err(e) => return Err(e),
        };

    if cfg.attraction_starts == 0 {
        return Err(Error::InvalidParameter("n_starts must be at least 1"));
    }
    let starts = attraction_starts(sys, cfg.attraction_starts, cfg.seed);
    let converged = count_attracted(sys, cyc, &starts, cfg.attraction_transient, cfg.attraction_tol);
    let fraction = converged as f64 / cfg.attraction_starts as f64;

    Ok(VerificationReport {
        lambda: sys.lambda(),
        cycle: *cyc,
        alpha_diagnostic: rotation.gamma1_rational,
        rotation,
        disjoint: disjointness_check(cyc, cfg.disjoint_delta),
        swap_forward: swap.forward,
        swap_backward: swap.backward,
        f2_gamma1: f2.gamma1,
        f2_gamma2: f2.gamma2,
        f2_swap: f2_swap_check(sys, cyc, cfg.n_samples, cfg.tol),
        union_invariant: union_invariance_check(sys, cyc, cfg.n_samples, cfg.tol),
        density_gamma1,
        density_gamma2,
        density_detail,
        rational_rotation,
        attraction: AttractionReport {
            passed: fraction >= cfg.min_attraction,
            fraction,
            converged,
            n_starts: cfg.attraction_starts,
            transient: cfg.attraction_transient,
            tol: cfg.attraction_tol,
            seed: cfg.seed,
            min_fraction: cfg.min_attraction,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::GOLDEN_CONJUGATE;
    use crate::map1d::{find_two_cycle, logistic_family, Logistic, DEFAULT_ROOT_TOL};
    use crate::skew::{exact_circle_orbit, RotationSpec};
    use alloc::vec;

    const ALPHA: f64 = 0.618_033_988_749_895;

    fn cycle(lambda: f64) -> TwoCycle {
        find_two_cycle(&logistic_family(), lambda, DEFAULT_ROOT_TOL).unwrap()
    }

    fn constant(lambda: f64, alpha: f64) -> SkewSystem<Logistic> {
        SkewSystem::new(logistic_family(), RotationSpec::constant(alpha).unwrap(), lambda).unwrap()
    }

    fn quarters() -> Vec<CirclePoint> {
        [0.0, 0.25, 0.5, 0.75].iter().map(|&x| normalize(x).unwrap()).collect()
    }

    /// Largest circular gap by scanning every point for its nearest
    /// counter-clockwise neighbour.
    fn brute_max_gap(points: &[CirclePoint]) -> f64 {
        points
            .iter()
            .map(|p| {
                points
                    .iter()
                    .map(|q| circle::wrap(q.rep() - p.rep()))
                    .filter(|&d| d > 0.0)
                    .fold(1.0_f64, f64::min)
            })
            .fold(0.0_f64, f64::max)
    }

    #[test]
    fn epsilon_net_examples() {
        let q = quarters();
        let pass = epsilon_net_check(&q, 0.3).unwrap();
        assert!(pass.passed);
        assert_eq!(pass.max_gap, 0.25);
        assert!(!epsilon_net_check(&q, 0.2).unwrap().passed);
        assert!(epsilon_net_check(&q, 0.0).is_err());
        assert!(epsilon_net_check(&q[..1], 0.3).is_err());

        let (g1, _) = exact_circle_orbit(&cycle(3.2), GOLDEN_CONJUGATE, 2000).unwrap();
        let net = epsilon_net_check(&g1.samples, 0.01).unwrap();
        assert!(net.passed);
        assert!((net.max_gap - brute_max_gap(&g1.samples)).abs() < 1e-15);
    }

    #[test]
    fn disjointness_examples() {
        let cyc = cycle(3.2);
        let d = disjointness_check(&cyc, 1e-6);
        assert!(d.passed);
        let closed = (0.2_f64 * 4.2).sqrt() / 3.2;
        assert!((d.margin - closed).abs() < 1e-12);
        assert!((d.margin - 0.286_410_981).abs() < 1e-9);

        let degenerate = TwoCycle { r2: cyc.r1, ..cyc };
        assert!(!disjointness_check(&degenerate, 1e-6).passed);

        for k in 1..=6 {
            let lambda = 3.0 + 10f64.powi(-k);
            let margin = disjointness_check(&cycle(lambda), 1e-6).margin;
            let closed = ((lambda - 3.0) * (lambda + 1.0)).sqrt() / lambda;
            assert!((margin - closed).abs() < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn swap_examples() {
        let cyc = cycle(3.2);
        let sys = constant(3.2, ALPHA);
        let rep = swap_invariance_check(&sys, &cyc, 512, 1e-9);
        assert!(rep.passed());
        assert!(rep.forward.max_r_deviation < 1e-12);
        assert!(rep.backward.max_r_deviation < 1e-12);

        let stale = constant(3.3, ALPHA);
        let rep = swap_invariance_check(&stale, &cyc, 512, 1e-9);
        assert!(!rep.forward.passed && !rep.backward.passed);
        let f = |r: f64| 3.3 * r * (1.0 - r);
        assert!((rep.forward.max_r_deviation - (f(cyc.r1) - cyc.r2).abs()).abs() < 1e-15);
        assert!((rep.backward.max_r_deviation - (f(cyc.r2) - cyc.r1).abs()).abs() < 1e-15);

        assert!(swap_invariance_check(&sys, &cyc, 2, 0.5).passed());
    }

    #[test]
    fn union_examples() {
        let cyc = cycle(3.2);
        assert!(union_invariance_check(&constant(3.2, ALPHA), &cyc, 512, 1e-9).passed);
        let stale = union_invariance_check(&constant(3.6, ALPHA), &cyc, 512, 1e-9);
        assert!(!stale.passed);
        assert!(union_invariance_check(&constant(3.6, ALPHA), &cyc, 64, 1.0).passed);
    }

    #[test]
    fn f2_examples() {
        let cyc = cycle(3.2);
        let rep = f2_invariance_check(&constant(3.2, ALPHA), &cyc, 512, 1e-9).unwrap();
        assert!(rep.gamma1.passed && rep.gamma2.passed);
        let want = circle::wrap(2.0 * ALPHA);
        assert!((rep.gamma1.theta_displacement - want).abs() < 1e-12);

        let scaled = SkewSystem::new(
            logistic_family(),
            RotationSpec::variable(|_: f64, r: f64| ALPHA * (1.0 + r)),
            3.2,
        )
        .unwrap();
        let rep = f2_invariance_check(&scaled, &cyc, 512, 1e-9).unwrap();
        assert!(rep.gamma1.passed && rep.gamma2.passed);
        let want = circle::wrap(ALPHA * (1.0 + cyc.r1) + ALPHA * (1.0 + cyc.r2));
        assert!((rep.double_step_rotation - want).abs() < 1e-15);

        let single = f2_invariance_check(&constant(3.2, ALPHA), &cyc, 1, 1e-9).unwrap();
        assert!(single.gamma1.passed);
    }

    #[test]
    fn f2_does_not_swap_distinct_circles() {
        let cyc = cycle(3.2);
        let c = f2_swap_check(&constant(3.2, ALPHA), &cyc, 64, 1e-9);
        assert!(!c.passed);
        assert!((c.margin - cyc.split()).abs() < 1e-12);
    }

    #[test]
    fn density_golden() {
        let cyc = cycle(3.2);
        let rep = density_certificate(&constant(3.2, ALPHA), &cyc, &DensityOptions::default()).unwrap();
        for d in [rep.gamma1, rep.gamma2] {
            assert!(d.passed);
            assert!(d.max_gap < 1e-3);
            assert!(d.distinct_gap_count <= 3);
            assert!(d.achieving_k.unwrap() <= 100_000);
        }
        assert!(rep.simulated_theta_deviation < 1e-9);
        assert!(rep.simulated_r_deviation < 1e-8);
    }

    #[test]
    fn density_rejects_rational_rotation() {
        let cyc = cycle(3.2);
        let err = density_certificate(&constant(3.2, 0.25), &cyc, &DensityOptions::default()).unwrap_err();
        let Error::RationalRotation(detail) = err else {
            panic!("{err:?}")
        };
        assert_eq!((detail.numerator, detail.denominator), (1, 2));
        assert_eq!(detail.distinct_points_gamma1, 2);
        assert_eq!(detail.distinct_points_gamma2, 2);

        let half = SkewSystem::new(logistic_family(), RotationSpec::variable(|_: f64, _: f64| 0.25), 3.2).unwrap();
        let err = density_certificate(&half, &cyc, &DensityOptions::default()).unwrap_err();
        let Error::RationalRotation(detail) = err else {
            panic!("{err:?}")
        };
        assert_eq!(detail.rotation, 0.5);
        assert_eq!(detail.distinct_points_gamma1, 2);
        assert_eq!(detail.distinct_points_gamma2, 2);
    }

    #[test]
    fn density_reports_failure_when_k_max_too_small() {
        let cyc = cycle(3.2);
        let opts = DensityOptions {
            k_max: 64,
            ..DensityOptions::default()
        };
        let rep = density_certificate(&constant(3.2, ALPHA), &cyc, &opts).unwrap();
        assert!(!rep.gamma1.passed);
        assert_eq!(rep.gamma1.achieving_k, None);
        assert_eq!(rep.gamma1.points_used, 64);
    }

    #[test]
    fn attraction_examples() {
        let cyc = cycle(3.2);
        let sys = constant(3.2, ALPHA);
        let frac = attraction_check(&sys, &cyc, 100, 10_000, 1e-6, 7).unwrap();
        assert!(frac >= 0.95, "{frac}");
        assert!(attraction_check(&sys, &cyc, 100, 0, 1e-6, 7).unwrap() < 0.05);

        let on_cycle = vec![SkewState { r: cyc.r1, theta: CirclePoint::ZERO }; 5];
        for transient in [0, 1, 17, 1000] {
            assert_eq!(count_attracted(&sys, &cyc, &on_cycle, transient, 1e-6), 5);
        }
        assert!(attraction_check(&sys, &cyc, 0, 10, 1e-6, 7).is_err());
    }

    #[test]
    fn attraction_starts_are_seeded() {
        let sys = constant(3.2, ALPHA);
        let a = attraction_starts(&sys, 20, 11);
        assert_eq!(a, attraction_starts(&sys, 20, 11));
        assert_ne!(a, attraction_starts(&sys, 20, 12));
        assert!(a.iter().all(|s| s.r > 0.0 && s.r < 1.0));
    }

    #[test]
    fn full_report_passes_at_3_2() {
        let cyc = cycle(3.2);
        let rep = verify_system(&constant(3.2, ALPHA), &cyc, &VerifyConfig::default()).unwrap();
        assert!(rep.all_passed(), "{rep:#?}");
        assert!(!rep.f2_swap.passed);
        assert_eq!(rep.alpha_diagnostic, None);
    }
}
