//! Seeded random source shared by every stochastic step of the pipeline.
//!
//! The stream is ChaCha20 (RFC 8439 block function, 64-bit counter, zero
//! stream id) keyed by the 32-byte seed whose first eight bytes are the
//! little-endian `u64` seed and whose remaining bytes are zero. Values are
//! consumed as 64-bit little-endian words. Bounded integers use rejection
//! sampling and shuffles are descending Fisher-Yates, so the sequences are
//! reproducible by any implementation of the same three rules.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone)]
pub struct DetRng {
    inner: ChaCha20Rng,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        Self {
            inner: ChaCha20Rng::from_seed(key),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..bound` by rejection: draws `w` until
    /// `w < u64::MAX - (u64::MAX % bound)`, then returns `w % bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let w = self.next_u64();
            if w < zone {
                return w % bound;
            }
        }
    }

    /// Uniform real in [0, 1) built from the top 53 bits of one word.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform real in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Standard normal via Box-Muller (one value per two draws).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.unit();
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// In-place Fisher-Yates: for i from len-1 down to 1, swap i with `below(i+1)`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
