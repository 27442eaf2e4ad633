//! Seed discipline shared by every sampler in the crate.
//!
//! A master seed fixes a ChaCha key; each trial draws from its own stream,
//! selected by the trial counter. Campaigns are therefore reproducible and
//! can be split across workers without changing any trial's randomness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Generator for the stream numbered `stream` under `master_seed`.
pub fn stream_rng(master_seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

pub fn seeded(seed: u64) -> SimRng {
    stream_rng(seed, 0)
}
