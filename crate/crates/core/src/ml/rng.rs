//! Seeded generators. Every random choice in training and simulation
//! draws from a stream derived here, so results depend only on the seed.

use rand::SeedableRng;
use rand_xorshift::XorShiftRng;

pub type Rng = XorShiftRng;

pub fn seeded(seed: u64) -> Rng {
    XorShiftRng::seed_from_u64(seed)
}

/// Stream `index` of a seeded job, e.g. one tree of a forest.
pub fn derive(seed: u64, index: u64) -> Rng {
    seeded(derive_seed(seed, index))
}

pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
