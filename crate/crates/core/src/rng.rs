//! Seeded random streams.
//!
//! Every sampler draws from `ChaCha8Rng::seed_from_u64(seed)` with a stream
//! number fixed per purpose, so independent samplers never share a sequence
//! and results are bit-identical across runs and platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator identity recorded in every report.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64 + set_stream";

pub(crate) mod streams {
    pub const FEASIBLE: u64 = 1;
    pub const SLATER: u64 = 2;
    pub const LAGRANGIAN: u64 = 3;
    pub const NONDEGENERACY: u64 = 0x100;
    pub const CONVEXITY_RAYS: u64 = 0x200;
    pub const CONVEXITY_PARTNERS: u64 = 0x300;
}

pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}
