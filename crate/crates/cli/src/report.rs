use std::io::Write;
use std::time::Instant;

use bethegeom::C64;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig, Suite};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub name: String,
    pub inputs: Value,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Non-check output: roots, Hamiltonian values, reported-only quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifact {
    pub suite: Suite,
    pub name: String,
    pub value: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub artifacts: Vec<Artifact>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: RunConfig, checks: Vec<CheckRecord>, artifacts: Vec<Artifact>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        let summary = Summary {
            checks: checks.len(),
            passed,
            failed: checks.len() - passed,
        };
        Self {
            tool: "bethegeom",
            version: env!("CARGO_PKG_VERSION"),
            config,
            checks,
            artifacts,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        u8::from(!self.all_passed())
    }
}

/// Collects checks for one suite. Each check gets the suite's random
/// stream, so results depend only on (config, seed, suite).
pub struct Recorder {
    pub suite: Suite,
    pub rng: ChaCha8Rng,
    timings: bool,
    pub checks: Vec<CheckRecord>,
    pub artifacts: Vec<Artifact>,
}

impl Recorder {
    pub fn new(suite: Suite, rng: ChaCha8Rng, timings: bool) -> Self {
        Self {
            suite,
            rng,
            timings,
            checks: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    /// Runs `f` and records its residual against `tolerance`. Library
    /// errors become failed checks with an infinite residual.
    pub fn check<F>(&mut self, name: impl Into<String>, inputs: Value, tolerance: f64, f: F) -> Option<f64>
    where
        F: FnOnce(&mut ChaCha8Rng) -> bethegeom::Result<f64>,
    {
        let start = Instant::now();
        let out = f(&mut self.rng);
        let seconds = if self.timings {
            start.elapsed().as_secs_f64()
        } else {
            0.0
        };
        let (residual, error) = match out {
            Ok(r) => (r, None),
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        self.checks.push(CheckRecord {
            suite: self.suite,
            name: name.into(),
            inputs,
            residual,
            tolerance,
            pass: residual < tolerance,
            seconds,
            error,
        });
        residual.is_finite().then_some(residual)
    }

    pub fn artifact(&mut self, name: impl Into<String>, value: Value) {
        self.artifacts.push(Artifact {
            suite: self.suite,
            name: name.into(),
            value,
        });
    }
}

/// [re, im] pairs, the same layout the config uses for complex numbers.
pub fn cjson(z: C64) -> Value {
    serde_json::json!([z.re, z.im])
}

pub fn cjson_vec(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|&z| cjson(z)).collect())
}

fn write_csv<W: Write>(report: &Report, w: W) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    out.write_record(["name", "residual", "tolerance", "pass", "seconds"])
        .map_err(io)?;
    for c in &report.checks {
        out.write_record([
            format!("{}.{}", c.suite.name(), c.name),
            format!("{:e}", c.residual),
            format!("{:e}", c.tolerance),
            c.pass.to_string(),
            format!("{}", c.seconds),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Serializes the report in the requested format.
pub fn render(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, report).map_err(|e| CliError::Io(e.to_string()))?;
            buf.push(b'\n');
        }
        Format::Csv => write_csv(report, &mut buf)?,
    }
    Ok(buf)
}

/// Writes the report to the configured path, or stdout when none is set.
pub fn emit(report: &Report, format: Format) -> Result<(), CliError> {
    let bytes = render(report, format)?;
    match &report.config.output.path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}
