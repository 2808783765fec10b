//! Configuration, suite dispatch and reporting for the `bethegeom` binary.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{resolve, validate_config, Command, Format, Overrides, RunConfig, Suite};
pub use report::{emit, render, Artifact, CheckRecord, Report, Summary};
pub use suites::run;

/// Failures that stop a run before or after the checks (exit status 2).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invariant violation at {path}: {message}")]
    InvariantViolation { path: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub const EXIT_INFRASTRUCTURE: u8 = 2;
