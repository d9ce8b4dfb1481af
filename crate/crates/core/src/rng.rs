//! Reproducible random streams.
//!
//! Every replicate of every experiment draws from its own ChaCha stream
//! identified by `(seed, stream)`, so results do not depend on how work is
//! scheduled across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// A ChaCha12 generator addressed by a 64-bit seed and a 64-bit stream index.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha12Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SeededRng {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Child stream `i` of the same seed.
    pub fn derive(&self, i: u64) -> SeededRng {
        SeededRng::new(self.seed, i)
    }
}

impl RngCore for SeededRng {
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

/// Stream index for replicate `rep` of sub-experiment `block`.
pub fn stream_id(block: u64, rep: u64) -> u64 {
    (block << 40) | rep
}
