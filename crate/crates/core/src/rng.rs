//! Seeded randomness. Every generator in the crate is ChaCha8 seeded with
//! `seed_from_u64(seed)` and a per-purpose stream id, so outputs are stable
//! across platforms and independent of thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) mod streams {
    pub const DIRECTIONS: u64 = 1;
    pub const SEMINMF: u64 = 2;
    pub const TOY: u64 = 3;
    pub const MLP_INIT: u64 = 4;
    pub const MLP_SHUFFLE: u64 = 5;
    pub const GRADCHECK: u64 = 6;
    pub const PAIRS: u64 = 7;
    pub const LOGREG: u64 = 8;
}
