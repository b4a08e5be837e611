//! Seeded, partition-friendly random streams.
//!
//! Every stochastic routine derives its generator from a `(seed, stream)`
//! pair. Partitioned work hands stream `b` to batch `b`, so merged statistics
//! are independent of worker count and scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Number of samples per Monte Carlo batch (one substream per batch).
pub const BATCH: usize = 8192;

/// Generator for `stream` within the family identified by `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
