//! Per-trial random streams.
//!
//! A trial's seed is a SplitMix64 chain over `(master, point, trial)`, so any
//! grid point can run on any worker in any order. Each trial seed keys a
//! ChaCha generator whose independent streams separate instance generation
//! from the Laplace noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const INSTANCE_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at grid point `point`.
pub fn derive_seed(master: u64, point: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ point) ^ trial)
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Stream used to build the trial's instance.
pub fn instance_rng(seed: u64) -> ChaCha8Rng {
    stream(seed, INSTANCE_STREAM)
}

/// Stream feeding the location-side Laplace noise. Every private algorithm
/// in a trial starts from a fresh copy, so all of them see the same noise.
pub fn noise_rng(seed: u64) -> ChaCha8Rng {
    stream(seed, NOISE_STREAM)
}
