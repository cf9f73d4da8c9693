//! Command-line front end and file formats for `skewcircle-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod format;
pub mod gspec;

pub use commands::{cmd_sweep, cmd_theorem2, cmd_verify, cmd_window, emit, Exit, Output};
pub use config::{OutputFormat, RunConfig};
pub use gspec::GSpec;
