//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a 64-bit seed
//! (`ChaCha8Rng::seed_from_u64`). Child streams are derived by hashing the
//! parent seed together with a child index through the SplitMix64 finalizer:
//!
//! ```text
//! child_seed = mix64(parent_seed ^ mix64(index + 0x9E3779B97F4A7C15))
//! ```
//!
//! so a substream depends only on the path of indices from the root seed,
//! never on how many values were drawn elsewhere. Corpus instance `i` of a
//! generator seeded with `s` uses `RandomStream::new(s).substream(i)`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child `index` under `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(GOLDEN_GAMMA)))
}

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream; does not advance `self`.
    pub fn substream(&self, index: u64) -> RandomStream {
        RandomStream::new(derive_seed(self.seed, index))
    }

    /// Child stream addressed by a path of indices.
    pub fn substream_path(&self, path: &[u64]) -> RandomStream {
        let seed = path.iter().fold(self.seed, |s, &i| derive_seed(s, i));
        RandomStream::new(seed)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
