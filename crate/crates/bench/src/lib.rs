//! Fixed inputs shared by the benchmarks.

use bethegeom::ChainSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random chain of length n drawn from a fixed seed.
pub fn chain(n: usize) -> ChainSpec {
    ChainSpec::random(n, &mut rng(n as u64))
}
