//! Reproducible random substreams.
//!
//! Every realization of an ensemble draws from its own ChaCha20 stream: the
//! key is derived from the user seed with `SeedableRng::seed_from_u64`, and
//! the 64-bit ChaCha stream id is the realization index. A realization's
//! draws therefore depend only on `(seed, index)`, never on which worker
//! produced it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Generator used for every sampling path in the crate.
pub type StreamRng = ChaCha20Rng;

/// Independent generator for realization `index` of an ensemble seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
