//! Per-trial random streams.
//!
//! Trial `i` of a run with seed `s` draws from its own ChaCha stream keyed by
//! a SplitMix64 hash of `(s, i)`, so results do not depend on how trials are
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(index.wrapping_add(0x632b_e59b_d9b4_e019)))
}

pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, index))
}
