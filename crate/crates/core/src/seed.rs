//! Deterministic seed derivation.
//!
//! A run has one seed. Stages derive their own seed from it by name, and
//! per-item seeds are derived from the stage seed and the item index, so
//! splitting work across threads cannot change what any item draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for every random draw.
pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the stage called `name`.
pub fn stage_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a over the seed bytes and the name
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in seed.to_le_bytes().iter().chain(name.as_bytes()) {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(h)
}

/// Seed for the `index`-th item of a stage.
pub fn item_seed(stage: u64, index: u64) -> u64 {
    splitmix64(stage ^ splitmix64(index))
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
