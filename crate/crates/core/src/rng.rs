//! Keyed random streams: one ChaCha8 generator per `(seed, domain, index)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream domain for random placements.
pub const DOMAIN_PLACEMENTS: u16 = 1;
/// Stream domain for scatterer draws.
pub const DOMAIN_SCATTERERS: u16 = 2;

/// Generator for item `index` of `domain` under `seed`. Streams are
/// independent, so items can be drawn in any order or in parallel.
pub fn stream_rng(seed: u64, domain: u16, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((domain as u64) << 48) | (index & ((1 << 48) - 1)));
    rng
}
