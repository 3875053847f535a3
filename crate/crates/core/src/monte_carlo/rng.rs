//! Reproducible random substreams.
//!
//! Every substream is a ChaCha8 keystream keyed by the run seed and selected
//! by the stream index through ChaCha's 64-bit stream id. ChaCha is a
//! counter-based generator, so substreams never overlap and a stream's output
//! depends only on `(seed, index)`, not on which thread draws from it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn substream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Half-open symbol range `[start, end)` handled by stream `index` when `n`
/// symbols are split into `streams` contiguous blocks.
pub fn block(n: u64, streams: u64, index: u64) -> (u64, u64) {
    let edge = |i: u64| ((n as u128 * i as u128) / streams as u128) as u64;
    (edge(index), edge(index + 1))
}
