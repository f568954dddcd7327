//! Seeded random number generation with documented stream derivation.
//!
//! Every randomized component draws from a ChaCha8 stream whose 64-bit seed
//! is derived from a master seed and a stream index via [`derive_seed`]
//! (SplitMix64 over `master XOR (index + 1) * GOLDEN_GAMMA`). The scheme is
//! fixed: identical seeds produce identical streams on every platform and
//! under any thread scheduling, because each independent unit of work (a
//! tree, a fold, a class shuffle) owns its own derived stream.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Weyl-sequence increment used by SplitMix64.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed for stream `index` from a master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
}

/// A ChaCha8 generator positioned at the start of the derived stream.
pub fn stream_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}
