//! Counter-based seeding: stream `index` of a ChaCha8 generator keyed by
//! `seed`, so parallel work draws the same numbers regardless of scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn derive_seed(seed: u64, index: u64) -> u64 {
    substream(seed, index).next_u64()
}
