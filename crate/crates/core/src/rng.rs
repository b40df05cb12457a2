//! Seeding contract for reproducible experiments.
//!
//! All randomness flows from a single `u64` seed through ChaCha8 (a
//! counter-based stream cipher generator whose output does not depend on the
//! platform). Trial `i` of a campaign uses the seed `seed ^ splitmix64(i)`, and
//! each trial seed is split into independent ChaCha streams by purpose so that,
//! for example, the observation noise can change without perturbing the prior
//! draw.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Purpose-specific stream identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Latent function values of a prior draw.
    Prior = 1,
    /// Initial design of a GP-EI run.
    Init = 2,
    /// Observation noise.
    Noise = 3,
    /// Fixed designs of Monte-Carlo lemma protocols.
    Design = 4,
    /// Auxiliary Monte-Carlo draws.
    Aux = 5,
}

/// The SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` within a campaign seeded by `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    seed ^ splitmix64(index)
}

pub fn stream(seed: u64, which: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}

#[inline]
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}
