//! Deterministic seed derivation for nested randomized procedures.
//!
//! Every layer of the toolkit (amplification runs, sampling trials,
//! random partition draws) owns an index and derives its substream seed
//! with [`substream_seed`]. The generator everywhere is ChaCha12, whose
//! output is specified byte-for-byte, so identical `(seed, index path)`
//! pairs reproduce identical results on any platform and with any number
//! of worker threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Derives the seed of substream `index` of a base seed.
///
/// SplitMix64 finalizer over `base ^ golden_ratio * (index + 1)`; the
/// finalizer's avalanche keeps adjacent indices uncorrelated.
pub fn substream_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The crate-wide reproducible generator seeded from a 64-bit value.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}
