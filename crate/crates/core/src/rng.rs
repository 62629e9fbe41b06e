//! Seeded generator construction.
//!
//! Every random draw in the crate goes through a ChaCha8 stream keyed by the
//! user seed and a stream id, so results do not depend on scheduling or on
//! how many draws an unrelated component consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream used by the population split.
pub const PARTITION_STREAM: u64 = 0;

/// Generator for `stream` under `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for the tie-break draw of one triple.
pub fn triple_stream(population_id: u8, triple_index: usize) -> u64 {
    (1u64 << 40) | (u64::from(population_id) << 32) | triple_index as u64
}

/// Stream id for one Monte Carlo replication.
pub fn replication_stream(rep: usize) -> u64 {
    (2u64 << 40) | rep as u64
}
