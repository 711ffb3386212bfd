//! Seeded randomness.
//!
//! Every random draw in the crate comes from ChaCha20 (`rand_chacha`), a
//! counter-based stream cipher generator, seeded with `seed_from_u64`. Cost
//! matrices consume the stream in row-major upper-triangle order
//! (`(0,1), (0,2), ..., (0,n-1), (1,2), ...`), one draw per entry.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type Rng = ChaCha20Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a path of indices (grid point, trial, stream) into
/// an independent child seed. SplitMix64 finalizer per step.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix(base), |acc, &k| splitmix(acc ^ splitmix(k.wrapping_add(0x9E37_79B9_7F4A_7C15))))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
