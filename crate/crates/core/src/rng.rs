//! Reproducible random streams.
//!
//! Every Monte Carlo draw comes from a ChaCha8 generator keyed by the run
//! seed. Substream `i` (the ChaCha stream id) is reserved for symbol index
//! `i`, so symbol `i` is identical whether it is produced alone, in a
//! sequential batch, or by any worker of a parallel batch.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type behind every stream.
pub type StreamRng = ChaCha8Rng;

/// Returns the substream for item `index` of the run keyed by `seed`.
pub fn substream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
