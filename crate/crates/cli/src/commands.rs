//! The four subcommands. Each returns its exit status, the document it
//! produced (JSON, or CSV for a sweep) and a short human-readable summary;
//! [`emit`] routes them to files and stdout.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use skewcircle_core::map1d::{
    check_doubling_condition, doubling_window, find_two_cycle, logistic_family, ConditionOptions,
    ConditionReport, DoublingWindow, Logistic,
};
use skewcircle_core::skew::{RotationSpec, SkewState, SkewSystem};
use skewcircle_core::verify::{verify_system, VerificationReport};
use skewcircle_core::{Error, TwoCycle};

use crate::config::{ConfigError, OutputFormat, RunConfig};
use crate::format::{self, SweepRow, SweepStatus, SCHEMA_VERSION};
use crate::gspec::GSpec;

/// Process exit status. Exactly one per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exit {
    /// Everything requested was certified.
    Certified = 0,
    BadConfig = 1,
    /// No 2-cycle, no window, or a certificate failed.
    Premise = 2,
    /// A rotation the certificates need to be irrational is rational.
    Irrational = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone)]
pub struct Output {
    pub exit: Exit,
    /// JSON report, or CSV for a sweep. `None` for configuration errors.
    pub document: Option<String>,
    pub summary: String,
    pub orbit_csv: Option<String>,
    pub csv_document: bool,
}

impl Output {
    fn config_error(err: impl std::fmt::Display) -> Self {
        Output {
            exit: Exit::BadConfig,
            document: None,
            summary: format!("configuration error: {err}\n"),
            orbit_csv: None,
            csv_document: false,
        }
    }
}

/// Writes the document to `--out` (if given), the orbit dump to
/// `--orbit-csv` (if produced), and the summary or document to stdout.
pub fn emit(cfg: &RunConfig, out: &Output) -> anyhow::Result<()> {
    if let (Some(path), Some(doc)) = (&cfg.out, &out.document) {
        fs::write(path, doc)?;
    }
    if let (Some(path), Some(csv)) = (&cfg.orbit_csv, &out.orbit_csv) {
        fs::write(path, csv)?;
    }
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();
    if out.exit == Exit::BadConfig {
        eprint!("{}", out.summary);
        return Ok(());
    }
    let doc_to_stdout = match cfg.format {
        OutputFormat::Json => !out.csv_document || cfg.out.is_none(),
        OutputFormat::Text => out.csv_document && cfg.out.is_none(),
    };
    match (&out.document, doc_to_stdout) {
        (Some(doc), true) => stdout.write_all(doc.as_bytes())?,
        _ => stdout.write_all(out.summary.as_bytes())?,
    }
    Ok(())
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct WindowDocument<'a> {
    schema_version: u32,
    command: &'static str,
    family: &'a str,
    lambda_range: [f64; 2],
    status: &'static str,
    exit_code: i32,
    window: Option<DoublingWindow>,
    condition: Option<ConditionReport>,
    error: Option<String>,
}

pub fn cmd_window(cfg: &RunConfig) -> Output {
    let range = cfg.validate().and_then(|_| cfg.require_range());
    let (lo, hi) = match range {
        Ok(r) => r,
        Err(e) => return Output::config_error(e),
    };
    let fam = logistic_family();
    let mut doc = WindowDocument {
        schema_version: SCHEMA_VERSION,
        command: "window",
        family: &cfg.family,
        lambda_range: [lo, hi],
        status: "ok",
        exit_code: 0,
        window: None,
        condition: None,
        error: None,
    };
    let mut summary = String::new();
    let exit = match doubling_window(&fam, lo, hi, cfg.window_tol) {
        Ok(window) => {
            doc.window = Some(window);
            let _ = writeln!(summary, "lambda_c = {:.9}", window.lambda_c);
            let _ = writeln!(summary, "lambda_0 = {:.9}", window.lambda_0);
            match check_doubling_condition(&fam, window.lambda_c, &ConditionOptions::default()) {
                Ok(cond) => {
                    doc.condition = Some(cond);
                    let _ = writeln!(
                        summary,
                        "[{}] flip derivative    |f' + 1| = {:.3e} at x* = {:.9}",
                        mark(cond.derivative_ok),
                        cond.derivative_defect,
                        cond.fixed_point
                    );
                    let _ = writeln!(
                        summary,
                        "[{}] transversality  {:.6e}",
                        mark(cond.transversality_ok),
                        cond.transversality
                    );
                    let _ = writeln!(
                        summary,
                        "[{}] nondegeneracy   {:.6e}",
                        mark(cond.nondegeneracy_ok),
                        cond.nondegeneracy
                    );
                    if cond.passed() {
                        Exit::Certified
                    } else {
                        doc.status = "condition-failed";
                        Exit::Premise
                    }
                }
                Err(e) => {
                    doc.status = "no-fixed-point";
                    doc.error = Some(e.to_string());
                    Exit::Premise
                }
            }
        }
        Err(Error::InvalidParameter(msg)) => return Output::config_error(msg),
        Err(e) => {
            doc.status = "window-not-found";
            doc.error = Some(e.to_string());
            let _ = writeln!(summary, "{e}");
            Exit::Premise
        }
    };
    doc.exit_code = exit.code();
    finish(exit, &doc, summary, None)
}

fn finish<T: Serialize>(exit: Exit, doc: &T, summary: String, orbit_csv: Option<String>) -> Output {
    match format::to_json(doc) {
        Ok(json) => Output {
            exit,
            document: Some(json),
            summary,
            orbit_csv,
            csv_document: false,
        },
        Err(e) => Output::config_error(format!("cannot encode report: {e}")),
    }
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    schema_version: u32,
    command: &'static str,
    family: &'a str,
    lambda: f64,
    alpha: Option<f64>,
    g: Option<GSpec>,
    status: &'static str,
    exit_code: i32,
    all_passed: bool,
    report: Option<VerificationReport>,
    error: Option<String>,
}

enum Rotation {
    Constant(f64),
    Variable(GSpec),
}

/// Certificates for a constant rotation by `alpha`.
pub fn cmd_verify(cfg: &RunConfig) -> Output {
    run_certificates(cfg, Rotation::Constant(cfg.alpha))
}

/// Certificates for the rotation `g(λ, r)` given by `--g`.
pub fn cmd_theorem2(cfg: &RunConfig) -> Output {
    match cfg.g {
        Some(g) => run_certificates(cfg, Rotation::Variable(g)),
        None => Output::config_error("--g is required"),
    }
}

fn run_certificates(cfg: &RunConfig, rotation: Rotation) -> Output {
    let lambda = match cfg.validate().and_then(|_| cfg.require_lambda()) {
        Ok(l) => l,
        Err(e) => return Output::config_error(e),
    };
    let (command, alpha, g, spec) = match rotation {
        Rotation::Constant(alpha) => match RotationSpec::constant(alpha) {
            Ok(spec) => ("verify", Some(alpha), None, spec),
            Err(e) => return Output::config_error(e),
        },
        Rotation::Variable(g) => ("theorem2", None, Some(g), RotationSpec::variable(g)),
    };
    let sys = match SkewSystem::new(logistic_family(), spec, lambda) {
        Ok(s) => s,
        Err(e) => return Output::config_error(e),
    };
    let mut doc = VerifyDocument {
        schema_version: SCHEMA_VERSION,
        command,
        family: &cfg.family,
        lambda,
        alpha,
        g,
        status: "certified",
        exit_code: 0,
        all_passed: false,
        report: None,
        error: None,
    };

    let cyc = match find_two_cycle(sys.family(), lambda, cfg.root_tol) {
        Ok(c) => c,
        Err(e) => {
            doc.status = "no-two-cycle";
            doc.error = Some(e.to_string());
            doc.exit_code = Exit::Premise.code();
            return finish(Exit::Premise, &doc, format!("{e}\n"), None);
        }
    };
    let report = match verify_system(&sys, &cyc, &cfg.verify_config()) {
        Ok(r) => r,
        Err(e) => return Output::config_error(e),
    };
    let orbit_csv = match cfg.orbit_csv {
        Some(_) => match orbit_dump(&sys, &cyc, cfg) {
            Ok(csv) => Some(csv),
            Err(e) => return Output::config_error(e),
        },
        None => None,
    };

    // A flagged rotation only blocks the certificate when its period is
    // shorter than the orbit the ε-net needs.
    let exit = if report.rational_rotation.is_some() {
        doc.status = "rational-rotation";
        Exit::Irrational
    } else if report.all_passed() {
        Exit::Certified
    } else {
        doc.status = "not-certified";
        Exit::Premise
    };
    doc.exit_code = exit.code();
    doc.all_passed = report.all_passed();
    let summary = summarize(&report);
    doc.report = Some(report);
    finish(exit, &doc, summary, orbit_csv)
}

fn orbit_dump(sys: &SkewSystem<Logistic>, cyc: &TwoCycle, cfg: &RunConfig) -> Result<String, ConfigError> {
    let start = SkewState {
        r: cyc.r1,
        theta: Default::default(),
    };
    let states = sys
        .orbit(start, cfg.orbit_len, 0)
        .map_err(|e| ConfigError::Invalid(format!("orbit dump: {e}")))?;
    let mut buf = Vec::new();
    format::write_orbit_csv(&mut buf, &states, cfg.embed)
        .map_err(|e| ConfigError::Invalid(format!("orbit dump: {e}")))?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

fn summarize(rep: &VerificationReport) -> String {
    let mut s = String::new();
    let c = &rep.cycle;
    let _ = writeln!(
        s,
        "lambda = {}  r1 = {:.10}  r2 = {:.10}  multiplier = {:.6}",
        rep.lambda, c.r1, c.r2, c.multiplier
    );
    let rot = &rep.rotation;
    let _ = writeln!(
        s,
        "rotation from r1 = {:.12}  from r2 = {:.12}  per F^2 = {:.12}",
        rot.on_gamma1, rot.on_gamma2, rot.double_step
    );
    let _ = writeln!(s, "[{}] disjoint            margin {:.3e}", mark(rep.disjoint.passed), rep.disjoint.margin);
    let _ = writeln!(
        s,
        "[{}] F(G1) = G2          r-dev {:.3e}  theta-dev {:.3e}",
        mark(rep.swap_forward.passed),
        rep.swap_forward.max_r_deviation,
        rep.swap_forward.max_theta_deviation
    );
    let _ = writeln!(
        s,
        "[{}] F(G2) = G1          r-dev {:.3e}  theta-dev {:.3e}",
        mark(rep.swap_backward.passed),
        rep.swap_backward.max_r_deviation,
        rep.swap_backward.max_theta_deviation
    );
    for (name, f2) in [("F^2(G1) = G1", &rep.f2_gamma1), ("F^2(G2) = G2", &rep.f2_gamma2)] {
        let _ = writeln!(
            s,
            "[{}] {name}        r-dev {:.3e}  theta-dev {:.3e}",
            mark(f2.passed),
            f2.max_r_deviation,
            f2.max_theta_deviation
        );
    }
    let _ = writeln!(
        s,
        "[{}] F(G1 u G2) = G1 u G2  r-dev {:.3e}",
        mark(rep.union_invariant.passed),
        rep.union_invariant.max_r_deviation
    );
    let _ = writeln!(
        s,
        "[info] F^2 swaps circles: {} (margin {:.3e})",
        rep.f2_swap.passed, rep.f2_swap.margin
    );
    match (&rep.density_gamma1, &rep.density_gamma2, &rep.rational_rotation) {
        (Some(d1), Some(d2), _) => {
            for (name, d) in [("G1", d1), ("G2", d2)] {
                let _ = writeln!(
                    s,
                    "[{}] density on {name}       max gap {:.3e} < eps {:.1e} at k = {}  ({} gap lengths, D* {:.3e})",
                    mark(d.passed),
                    d.max_gap,
                    d.eps,
                    d.points_used,
                    d.distinct_gap_count,
                    d.star_discrepancy
                );
            }
        }
        (_, _, Some(r)) => {
            let _ = writeln!(
                s,
                "[FAIL] density: rotation {} = {}/{}; only {} and {} distinct points, {} needed",
                r.rotation,
                r.numerator,
                r.denominator,
                r.distinct_points_gamma1,
                r.distinct_points_gamma2,
                r.required_points
            );
        }
        _ => {}
    }
    let a = &rep.attraction;
    let _ = writeln!(
        s,
        "[{}] attraction          {}/{} starts converged (seed {})",
        mark(a.passed),
        a.converged,
        a.n_starts,
        a.seed
    );
    s
}

fn sweep_row(lambda: f64, root_tol: f64) -> SweepRow {
    let empty = |status| SweepRow {
        lambda,
        r1: None,
        r2: None,
        multiplier: None,
        margin: None,
        status,
    };
    match find_two_cycle(&logistic_family(), lambda, root_tol) {
        Ok(c) => SweepRow {
            lambda,
            r1: Some(c.r1),
            r2: Some(c.r2),
            multiplier: Some(c.multiplier),
            margin: Some(c.split()),
            status: if c.is_attracting() {
                SweepStatus::Ok
            } else {
                SweepStatus::Unstable
            },
        },
        Err(Error::AmbiguousCycles(_)) => empty(SweepStatus::Ambiguous),
        Err(_) => empty(SweepStatus::NoCycle),
    }
}

/// The uniform λ-grid of a sweep, endpoints included.
pub fn sweep_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
        .collect()
}

pub fn cmd_sweep(cfg: &RunConfig) -> Output {
    let (lo, hi) = match cfg.validate().and_then(|_| cfg.require_range()) {
        Ok(r) => r,
        Err(e) => return Output::config_error(e),
    };
    let rows: Vec<SweepRow> = sweep_grid(lo, hi, cfg.points)
        .into_par_iter()
        .map(|lambda| sweep_row(lambda, cfg.root_tol))
        .collect();
    let mut buf = Vec::new();
    if let Err(e) = format::write_sweep_csv(&mut buf, &rows) {
        return Output::config_error(format!("cannot encode sweep: {e}"));
    }
    let count = |st| rows.iter().filter(|r| r.status == st).count();
    let summary = format!(
        "{} rows: {} ok, {} unstable, {} no-cycle, {} ambiguous\n",
        rows.len(),
        count(SweepStatus::Ok),
        count(SweepStatus::Unstable),
        count(SweepStatus::NoCycle),
        count(SweepStatus::Ambiguous)
    );
    Output {
        exit: Exit::Certified,
        document: Some(String::from_utf8(buf).expect("csv output is UTF-8")),
        summary,
        orbit_csv: None,
        csv_document: true,
    }
}
