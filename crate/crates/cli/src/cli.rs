//! Argument parsing. Flags override the config file, which overrides the
//! built-in defaults.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Exit, Output};
use crate::config::{OutputFormat, RunConfig};
use crate::gspec::GSpec;

#[derive(Debug, Parser)]
#[command(name = "skewcircle", version, about = "Invariant double circles of skew products over the logistic 2-cycle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate the period-doubling window and check the flip condition.
    Window(Flags),
    /// Certify the invariant double circle for a constant rotation.
    Verify(Flags),
    /// Certify the invariant double circle for a rotation g(λ, r).
    Theorem2(Flags),
    /// Tabulate the 2-cycle over a λ-grid as CSV.
    Sweep(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file with any of the settings below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_max: Option<f64>,
    /// Grid points for a sweep.
    #[arg(long)]
    pub points: Option<usize>,
    /// Constant rotation amount.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Rotation function: const:a, affine:a,b or scaled:a.
    #[arg(long)]
    pub g: Option<GSpec>,
    /// Orbit points per circle for the density certificate.
    #[arg(long)]
    pub orbit_len: Option<usize>,
    /// Burn-in steps for the attraction check.
    #[arg(long)]
    pub transient: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long)]
    pub attraction_starts: Option<usize>,
    #[arg(long)]
    pub attraction_tol: Option<f64>,
    #[arg(long)]
    pub max_denominator: Option<i64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the JSON (or sweep CSV) document here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Dump the simulated orbit as CSV.
    #[arg(long)]
    pub orbit_csv: Option<PathBuf>,
    /// Add the (x, y) torus embedding to the orbit dump.
    #[arg(long)]
    pub embed: bool,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

macro_rules! overlay {
    ($cfg:ident, $flags:ident: $($field:ident),*) => {
        $(if let Some(v) = $flags.$field.clone() { $cfg.$field = v.into(); })*
    };
}

impl Flags {
    pub fn resolve(&self) -> Result<RunConfig, crate::config::ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        overlay!(cfg, self: family, points, alpha, orbit_len, transient, eps, tol, n_samples,
            attraction_starts, attraction_tol, max_denominator, seed, format);
        for (slot, v) in [
            (&mut cfg.lambda, self.lambda),
            (&mut cfg.lambda_min, self.lambda_min),
            (&mut cfg.lambda_max, self.lambda_max),
        ] {
            if v.is_some() {
                *slot = v;
            }
        }
        if self.g.is_some() {
            cfg.g = self.g;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        if self.orbit_csv.is_some() {
            cfg.orbit_csv = self.orbit_csv.clone();
        }
        cfg.embed |= self.embed;
        Ok(cfg)
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Exit::BadConfig.code() } else { 0 };
        }
    };
    let (flags, cmd): (&Flags, fn(&RunConfig) -> Output) = match &cli.command {
        Command::Window(f) => (f, commands::cmd_window),
        Command::Verify(f) => (f, commands::cmd_verify),
        Command::Theorem2(f) => (f, commands::cmd_theorem2),
        Command::Sweep(f) => (f, commands::cmd_sweep),
    };
    let cfg = match flags.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return Exit::BadConfig.code();
        }
    };
    let output = cmd(&cfg);
    if let Err(e) = commands::emit(&cfg, &output) {
        eprintln!("cannot write output: {e:#}");
        return Exit::BadConfig.code();
    }
    output.exit.code()
}
