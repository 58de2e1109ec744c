//! Deterministic RNG stream derivation.
//!
//! One independent stream per (seed, drop index, population), so that a
//! change in one population's parameters cannot perturb another's draws
//! and results are independent of execution order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random-draw populations of a drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Typical-link geometry, serving state and signal fading.
    Signal = 0,
    /// UAV interferer placement, activity, powers, states, fading.
    UavField = 1,
    /// GUE interferer placement, powers, states, fading.
    GueField = 2,
    /// Other-BS placement (GUE uplink drops).
    BsField = 3,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// The RNG for one population of one drop.
pub fn drop_rng(seed: u64, drop_index: u64, stream: Stream) -> ChaCha8Rng {
    let mut state = seed;
    let a = splitmix64(&mut state);
    let mut state = a ^ drop_index.wrapping_mul(0xD1342543DE82EF95).wrapping_add(1);
    let b = splitmix64(&mut state);
    let mut state = b ^ (stream as u64).wrapping_add(0xA5A5A5A5);
    ChaCha8Rng::seed_from_u64(splitmix64(&mut state))
}
