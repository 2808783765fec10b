//! Verification suites. Each suite draws from its own ChaCha stream keyed
//! by (seed, suite), so selecting a subset of suites does not change the
//! draws of the others.

mod bethe;
mod oper;
mod qop;
mod qq;
mod spinchain;
mod trs;
mod vertex;

use bethegeom::bethe::{solve_all, BetheInstance, SolveAllReport};
use bethegeom::spinchain::chain::random_annulus;
use bethegeom::{ChainSpec, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, Suite};
use crate::report::{Recorder, Report};

pub fn run(config: &RunConfig) -> Report {
    let spec = config.spec();
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    for &suite in &config.suites {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(suite_stream(suite));
        let mut rec = Recorder::new(suite, rng, config.report.timings);
        match suite {
            Suite::Spinchain => spinchain::run(config, &spec, &mut rec),
            Suite::Bethe => bethe::run(config, &spec, &mut rec),
            Suite::QOperator => qop::run(config, &spec, &mut rec),
            Suite::Vertex => vertex::run(config, &spec, &mut rec),
            Suite::Qq => qq::run(config, &spec, &mut rec),
            Suite::Oper => oper::run(config, &spec, &mut rec),
            Suite::Trs => trs::run(config, &spec, &mut rec),
        }
        checks.append(&mut rec.checks);
        artifacts.append(&mut rec.artifacts);
    }
    Report::new(config.clone(), checks, artifacts)
}

fn suite_stream(s: Suite) -> u64 {
    Suite::ALL.iter().position(|&x| x == s).expect("listed") as u64 + 1
}

pub(crate) fn spectral_point(rng: &mut ChaCha8Rng) -> C64 {
    random_annulus(rng, 0.5, 2.0)
}

pub(crate) fn solve_sector(config: &RunConfig, spec: &ChainSpec, k: usize) -> bethegeom::Result<SolveAllReport> {
    Ok(solve_all(&BetheInstance::aba(spec, k)?, &config.solver))
}

pub(crate) fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}
