//! Seeded random streams.
//!
//! Every randomized operation takes an [`RngStream`]. Streams are derived from a
//! base seed plus a list of integer keys (instance index, replica index, phase)
//! so that independent workers never share generator state and a result can be
//! reproduced from its recorded seed alone.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `keys` into `seed`, giving the seed of an independent substream.
///
/// The mapping is a fixed function of its inputs; `derive_seed(s, &[])` is `s`.
pub fn derive_seed(seed: u64, keys: &[u64]) -> u64 {
    keys.iter()
        .fold(seed, |acc, &k| splitmix64(acc ^ splitmix64(k.wrapping_add(GOLDEN_GAMMA))))
}

/// A single-owner pseudo-random stream (ChaCha8 keyed by a 64-bit seed).
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for `(seed, keys...)`, e.g. `RngStream::derive(seed, &[instance, replica])`.
    pub fn derive(seed: u64, keys: &[u64]) -> Self {
        Self::new(derive_seed(seed, keys))
    }

    /// Child stream keyed off this stream's seed. Does not advance `self`.
    pub fn substream(&self, keys: &[u64]) -> Self {
        Self::derive(self.seed, keys)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
