//! Seeded random streams.
//!
//! Every stochastic routine takes a 64-bit seed and draws from a ChaCha8
//! stream keyed by `(seed, stream_id)`. The pair is mixed through the
//! SplitMix64 finalizer so nearby seeds give unrelated streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream ids for the places that draw randomness.
pub mod stream {
    pub const GENERATOR: u64 = 0x47454e;
    pub const DYNAMICS: u64 = 0x44594e;
}

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(seed: u64, stream_id: u64) -> u64 {
    mix64(seed ^ mix64(stream_id))
}

pub fn substream(seed: u64, stream_id: u64) -> Rng {
    Rng::seed_from_u64(derive_seed(seed, stream_id))
}
