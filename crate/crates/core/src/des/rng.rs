//! Splittable random streams keyed by `(root seed, path)`.
//!
//! A stream's key is derived only from its seed and path, never from how
//! many values a parent has drawn, so `fork` can be called in any order and
//! on any thread. Draws come from ChaCha8, which is counter-based.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    path: Vec<u64>,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_path(seed, Vec::new())
    }

    pub fn with_path(seed: u64, path: Vec<u64>) -> Self {
        let mut h = splitmix64(seed);
        for &label in &path {
            h = splitmix64(h ^ splitmix64(label.wrapping_add(GOLDEN)));
        }
        let mut key = [0u8; 32];
        for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
            h = splitmix64(h.wrapping_add(i as u64));
            chunk.copy_from_slice(&h.to_le_bytes());
        }
        Self {
            seed,
            path,
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    /// Child stream at `path + [label]`, independent of the parent's position.
    pub fn fork(&self, label: u64) -> Self {
        let mut path = self.path.clone();
        path.push(label);
        Self::with_path(self.seed, path)
    }
}

pub fn fork_stream(parent: &RngStream, label: u64) -> RngStream {
    parent.fork(label)
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
