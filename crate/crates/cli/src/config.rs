use std::path::PathBuf;

use bethegeom::bethe::HomotopyConfig;
use bethegeom::spinchain::chain::{random_annulus, MAX_SITES};
use bethegeom::vertex::ExtrapolationPolicy;
use bethegeom::{ChainSpec, Error as LibError, Precision, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Bethe,
    Vertex,
    Qq,
    Oper,
    Trs,
    VerifyAll,
}

/// A group of checks. Commands select suites; `verify-all` runs every
/// suite in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Spinchain,
    Bethe,
    QOperator,
    Vertex,
    Qq,
    Oper,
    Trs,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Spinchain,
        Suite::Bethe,
        Suite::QOperator,
        Suite::Vertex,
        Suite::Qq,
        Suite::Oper,
        Suite::Trs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spinchain => "spinchain",
            Suite::Bethe => "bethe",
            Suite::QOperator => "q-operator",
            Suite::Vertex => "vertex",
            Suite::Qq => "qq",
            Suite::Oper => "oper",
            Suite::Trs => "trs",
        }
    }
}

impl Command {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            Command::Spectrum => vec![Suite::Spinchain, Suite::QOperator],
            Command::Bethe => vec![Suite::Bethe],
            Command::Vertex => vec![Suite::Vertex],
            Command::Qq => vec![Suite::Qq],
            Command::Oper => vec![Suite::Oper],
            Command::Trs => vec![Suite::Trs],
            Command::VerifyAll => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Samples {
    /// Random spectral parameters per eigen-residual check.
    pub spectral_points: usize,
    /// (u_1, u_2) pairs for transfer-matrix commutativity.
    pub commutator_pairs: usize,
    pub ybe_triples: usize,
    /// Evaluation points for gauge and Bäcklund checks.
    pub gauge_points: usize,
}

impl Default for Samples {
    fn default() -> Self {
        Self {
            spectral_points: 5,
            commutator_pairs: 50,
            ybe_triples: 100,
            gauge_points: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportOptions {
    /// Record wall-clock seconds per check. Off by default so that reports
    /// are byte-stable.
    pub timings: bool,
}

/// Chain section as written by the user; omitted parameters are drawn
/// from the seed.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawChain {
    n: Option<usize>,
    a: Option<Vec<C64>>,
    hbar: Option<C64>,
    zeta: Option<C64>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawConfig {
    command: Option<Command>,
    chain: RawChain,
    k: Option<usize>,
    xi: Option<Vec<C64>>,
    solver: HomotopyConfig,
    truncation: Option<usize>,
    vertex_order: Option<usize>,
    extrapolation: ExtrapolationPolicy,
    samples: Samples,
    precision: Precision,
    seed: u64,
    suites: Option<Vec<Suite>>,
    output: OutputConfig,
    report: ReportOptions,
}

/// Fully resolved chain parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub n: usize,
    pub a: Vec<C64>,
    pub hbar: C64,
    pub zeta: C64,
}

/// Resolved run configuration. Serializing it gives a config that
/// reproduces the run exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub chain: ChainConfig,
    /// Weight sector; `None` runs every k.
    pub k: Option<usize>,
    /// tRS coordinates, ∏ξ = 1.
    pub xi: Vec<C64>,
    pub solver: HomotopyConfig,
    pub truncation: usize,
    pub vertex_order: usize,
    pub extrapolation: ExtrapolationPolicy,
    pub samples: Samples,
    pub precision: Precision,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub output: OutputConfig,
    pub report: ReportOptions,
}

pub const DEFAULT_TRUNCATION: usize = 6;
pub const DEFAULT_VERTEX_ORDER: usize = 3;

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub precision: Option<Precision>,
}

fn invariant(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::InvariantViolation {
        path: path.into(),
        message: message.into(),
    }
}

/// Maps a chain construction error ("field: message") onto a config path.
fn chain_error(e: LibError) -> CliError {
    match e {
        LibError::InvalidSpec(msg) => match msg.split_once(": ") {
            Some((field, rest)) if !field.contains(' ') || field.starts_with("a[") => {
                let field = field.split(", ").last().unwrap_or(field);
                invariant(format!("chain.{field}"), rest)
            }
            _ => invariant("chain", msg),
        },
        other => invariant("chain", other.to_string()),
    }
}

/// Parses and validates a JSON config; every invariant is checked before
/// any suite runs.
pub fn validate_config(raw: &str) -> Result<RunConfig, CliError> {
    resolve(raw, &Overrides::default())
}

pub fn resolve(raw: &str, ov: &Overrides) -> Result<RunConfig, CliError> {
    let rc: RawConfig = serde_json::from_str(raw).map_err(|e| CliError::Parse(e.to_string()))?;
    let command = ov.command.or(rc.command).unwrap_or(Command::VerifyAll);
    let seed = ov.seed.unwrap_or(rc.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let n = match (&rc.chain.n, &rc.chain.a) {
        (Some(n), Some(a)) if *n != a.len() => {
            return Err(invariant("chain.n", format!("n = {n} but a has {} entries", a.len())))
        }
        (Some(n), _) => *n,
        (None, Some(a)) => a.len(),
        (None, None) => return Err(invariant("chain.n", "give n or the evaluation parameters a")),
    };
    if n == 0 || n > MAX_SITES {
        return Err(invariant("chain.n", format!("n = {n} outside 1..={MAX_SITES}")));
    }
    // Draw every default even when given, so the stream does not depend on
    // which fields are present.
    let drawn = ChainSpec::random(n, &mut rng);
    let a = rc.chain.a.clone().unwrap_or_else(|| drawn.a().to_vec());
    let hbar = rc.chain.hbar.unwrap_or(drawn.hbar());
    let zeta = rc.chain.zeta.unwrap_or(drawn.zeta());
    let spec = ChainSpec::new(a, hbar, zeta).map_err(chain_error)?;

    if let Some(k) = rc.k {
        if k > n {
            return Err(invariant("k", format!("k = {k} exceeds n = {n}")));
        }
    }

    let mut drawn_xi: Vec<C64> = (0..n).map(|_| random_annulus(&mut rng, 0.5, 2.0)).collect();
    let g = drawn_xi.iter().product::<C64>().powf(1.0 / n as f64);
    drawn_xi.iter_mut().for_each(|x| *x /= g);
    let xi = rc.xi.clone().unwrap_or(drawn_xi);
    if xi.len() != n {
        return Err(invariant("xi", format!("expected {n} entries, got {}", xi.len())));
    }
    for (i, x) in xi.iter().enumerate() {
        if !(x.norm() > 0.0) || !x.re.is_finite() || !x.im.is_finite() {
            return Err(invariant(format!("xi[{i}]"), "must be finite and nonzero"));
        }
        for (j, y) in xi.iter().enumerate().take(i) {
            if (x - y).norm() <= 1e-8 * x.norm().max(y.norm()) {
                return Err(invariant(format!("xi[{i}]"), format!("coincides with xi[{j}]")));
            }
        }
    }

    validate_solver(&rc.solver)?;
    let ex = &rc.extrapolation;
    if ex.j_max < ex.j_min + 1 {
        return Err(invariant(
            "extrapolation.j_max",
            "need at least two nodes (j_max > j_min)",
        ));
    }
    if ex.j_max > 40 {
        return Err(invariant(
            "extrapolation.j_max",
            "nodes below 2^-40 are meaningless in binary64",
        ));
    }
    if !(ex.tolerance > 0.0) {
        return Err(invariant("extrapolation.tolerance", "must be positive"));
    }
    let s = &rc.samples;
    for (name, v) in [
        ("spectral_points", s.spectral_points),
        ("commutator_pairs", s.commutator_pairs),
        ("ybe_triples", s.ybe_triples),
        ("gauge_points", s.gauge_points),
    ] {
        if v == 0 {
            return Err(invariant(format!("samples.{name}"), "must be at least 1"));
        }
    }

    let mut output = rc.output.clone();
    if let Some(p) = &ov.out {
        output.path = Some(p.clone());
    }
    if let Some(f) = ov.format {
        output.format = f;
    }
    let precision = ov.precision.unwrap_or(rc.precision);
    let mut solver = rc.solver.clone();
    solver.precision = precision;

    Ok(RunConfig {
        command,
        chain: ChainConfig {
            n,
            a: spec.a().to_vec(),
            hbar: spec.hbar(),
            zeta: spec.zeta(),
        },
        k: rc.k,
        xi,
        solver,
        truncation: rc.truncation.unwrap_or(DEFAULT_TRUNCATION),
        vertex_order: rc.vertex_order.unwrap_or(DEFAULT_VERTEX_ORDER),
        extrapolation: rc.extrapolation,
        samples: rc.samples,
        precision,
        seed,
        suites: rc.suites.unwrap_or_else(|| command.suites()),
        output,
        report: rc.report,
    })
}

fn validate_solver(s: &HomotopyConfig) -> Result<(), CliError> {
    let positive = [
        ("initial_step", s.initial_step),
        ("min_step", s.min_step),
        ("max_step", s.max_step),
        ("newton_tolerance", s.newton_tolerance),
        ("collision_gap", s.collision_gap),
        ("residual_tolerance", s.residual_tolerance),
    ];
    for (name, v) in positive {
        if !(v > 0.0) || !v.is_finite() {
            return Err(invariant(format!("solver.{name}"), "must be positive and finite"));
        }
    }
    if s.min_step > s.initial_step || s.initial_step > s.max_step || s.max_step > 1.0 {
        return Err(invariant(
            "solver",
            "steps must satisfy min_step <= initial_step <= max_step <= 1",
        ));
    }
    if s.max_newton_iterations == 0 || s.max_newton_iterations > 50 {
        return Err(invariant("solver.max_newton_iterations", "must lie in 1..=50"));
    }
    Ok(())
}

impl RunConfig {
    pub fn spec(&self) -> ChainSpec {
        ChainSpec::new(self.chain.a.clone(), self.chain.hbar, self.chain.zeta).expect("validated at resolution")
    }

    /// Weight sectors to run.
    pub fn sectors(&self) -> Vec<usize> {
        match self.k {
            Some(k) => vec![k],
            None => (0..=self.chain.n).collect(),
        }
    }
}
