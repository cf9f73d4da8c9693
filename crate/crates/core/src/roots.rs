//! Derivative-free bracketing on a uniform grid, followed by bisection and a
//! guarded Newton polish.

use alloc::vec::Vec;

/// Cells in the top-level sign scan.
pub(crate) const SCAN_CELLS: usize = 4096;
/// Bisection stops once the bracket is narrower than this.
pub(crate) const BISECT_WIDTH: f64 = 1e-13;
pub(crate) const NEWTON_STEPS: usize = 5;

/// Local minima of `|s|` without a sign change are re-scanned on this many
/// sub-cells, up to `REFINE_DEPTH` levels, to catch close root pairs and
/// tangencies.
const REFINE_CELLS: usize = 16;
const REFINE_DEPTH: usize = 4;

/// A located root together with the interval it may be polished in.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub estimate: f64,
}

pub(crate) fn scan<S: Fn(f64) -> f64>(s: &S, lo: f64, hi: f64, tol: f64) -> Vec<Bracket> {
    let mut out = Vec::new();
    scan_interval(s, lo, hi, SCAN_CELLS, 0, tol, &mut out);
    out
}

fn scan_interval<S: Fn(f64) -> f64>(
    s: &S,
    lo: f64,
    hi: f64,
    cells: usize,
    depth: usize,
    tol: f64,
    out: &mut Vec<Bracket>,
) {
    let width = (hi - lo) / cells as f64;
    let xs: Vec<f64> = (0..=cells)
        .map(|i| if i == cells { hi } else { lo + width * i as f64 })
        .collect();
    let vs: Vec<f64> = xs.iter().map(|&x| s(x)).collect();

    // Sub-scan endpoints were already inspected one level up.
    let (first, last) = if depth == 0 { (0, cells) } else { (1, cells - 1) };
    for i in first..=last {
        if vs[i] == 0.0 {
            out.push(Bracket {
                lo: xs[i.saturating_sub(1)],
                hi: xs[(i + 1).min(cells)],
                estimate: xs[i],
            });
        }
    }

    for i in 0..cells {
        let (a, b) = (vs[i], vs[i + 1]);
        if a.is_finite() && b.is_finite() && a * b < 0.0 {
            let x = bisect(s, xs[i], xs[i + 1], a);
            out.push(Bracket {
                lo: xs[i],
                hi: xs[i + 1],
                estimate: x,
            });
        }
    }

    for i in 1..cells {
        let (a, m, b) = (vs[i - 1], vs[i], vs[i + 1]);
        if !(a.is_finite() && m.is_finite() && b.is_finite()) || m == 0.0 {
            continue;
        }
        let same_sign = a * m > 0.0 && m * b > 0.0;
        let dip = m.abs() < a.abs() && m.abs() <= b.abs();
        if !(same_sign && dip) {
            continue;
        }
        if depth < REFINE_DEPTH {
            scan_interval(s, xs[i - 1], xs[i + 1], REFINE_CELLS, depth + 1, tol, out);
        } else if m.abs() < tol {
            out.push(Bracket {
                lo: xs[i - 1],
                hi: xs[i + 1],
                estimate: xs[i],
            });
        }
    }
}

fn bisect<S: Fn(f64) -> f64>(s: &S, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > BISECT_WIDTH {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = s(m);
        if fm == 0.0 {
            return m;
        }
        if !fm.is_finite() {
            break;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// At most [`NEWTON_STEPS`] Newton steps on `g`, each kept only if it stays
/// inside `[lo, hi]` and reduces `|g|`.
pub(crate) fn polish<G, D>(g: &G, dg: &D, bracket: Bracket) -> f64
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = bracket.estimate;
    let mut gx = g(x);
    for _ in 0..NEWTON_STEPS {
        if gx == 0.0 {
            break;
        }
        let d = dg(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - gx / d;
        if !(next >= bracket.lo && next <= bracket.hi) {
            break;
        }
        let gn = g(next);
        if !(gn.abs() < gx.abs()) {
            break;
        }
        x = next;
        gx = gn;
    }
    x
}

/// Sorts ascending and merges values closer than `merge`.
pub(crate) fn dedup_sorted(mut xs: Vec<f64>, merge: f64) -> Vec<f64> {
    xs.sort_unstable_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(xs.len());
    for x in xs {
        match out.last() {
            Some(&prev) if x - prev < merge => {}
            _ => out.push(x),
        }
    }
    out
}
