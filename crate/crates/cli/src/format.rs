//! Output encodings: JSON reports and CSV tables with reals written at 17
//! significant digits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use skewcircle_core::circle::circle_embed;
use skewcircle_core::skew::SkewState;

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: u32 = 1;

/// A real in scientific notation with 17 significant digits.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Compact JSON with every `f64` in [`real`] form.
struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(real(value).as_bytes())
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SigDigits);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// `k, r, theta` (plus `x, y` on the unit circle when `embed` is set).
pub fn write_orbit_csv<W: Write>(out: W, states: &[SkewState], embed: bool) -> csv::Result<()> {
    let mut w = csv_writer(out);
    if embed {
        w.write_record(["k", "r", "theta", "x", "y"])?;
    } else {
        w.write_record(["k", "r", "theta"])?;
    }
    for (k, s) in states.iter().enumerate() {
        let mut row = vec![k.to_string(), real(s.r), real(s.theta.rep())];
        if embed {
            let (x, y) = circle_embed(s.theta);
            row.push(real(x));
            row.push(real(y));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// One row of a parameter sweep. Missing values are written as empty cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub multiplier: Option<f64>,
    pub margin: Option<f64>,
    pub status: SweepStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepStatus {
    /// Attracting 2-cycle.
    Ok,
    /// 2-cycle present but `|multiplier| ≥ 1`.
    Unstable,
    NoCycle,
    Ambiguous,
}

impl SweepStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepStatus::Ok => "ok",
            SweepStatus::Unstable => "unstable",
            SweepStatus::NoCycle => "no-cycle",
            SweepStatus::Ambiguous => "ambiguous",
        }
    }
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> csv::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["lambda", "r1", "r2", "multiplier", "margin", "status"])?;
    let opt = |x: Option<f64>| x.map(real).unwrap_or_default();
    for row in rows {
        w.write_record([
            real(row.lambda),
            opt(row.r1),
            opt(row.r2),
            opt(row.multiplier),
            opt(row.margin),
            row.status.as_str().to_owned(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
