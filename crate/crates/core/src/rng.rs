//! Random stream derivation.
//!
//! Every random draw comes from a stream keyed by `(master_seed, index,
//! purpose)`, so a trial can be reproduced alone, in any order, on any
//! thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Drop = 0,
    Fading = 1,
    GraphColoring = 2,
    HypergraphColoring = 3,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for sub-experiment `index` (e.g. a sweep point).
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

pub fn stream(master_seed: u64, trial_index: u64, purpose: Purpose) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, trial_index));
    rng.set_stream(purpose as u64);
    rng
}
