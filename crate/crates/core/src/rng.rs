//! Counter-based splittable generator.
//!
//! A stream is identified by a 64-bit `key`. Output `i` of the stream is
//! `mix(key + (i + 1) * GAMMA)` where `mix` is the SplitMix64 finalizer and
//! `GAMMA = 0x9e37_79b9_7f4a_7c15`. This is exactly SplitMix64 seeded with
//! `key`, so the `n`-th output can be computed without producing the first
//! `n - 1`.
//!
//! Child streams are derived with [`SplitRng::split`]:
//!
//! ```text
//! child_key = mix(key ^ mix(index + SPLIT_SALT))
//! ```
//!
//! with `SPLIT_SALT = 0x632b_e59b_d9b4_e019`. The harness derives every run
//! seed as `root.split(mode).split(point).split(run).key()` and every
//! per-depth substream of a run as `SplitRng::new(seed).split(depth_index)`.
//! This derivation is part of the CSV reproducibility contract.

use rand_core::RngCore;

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const SPLIT_SALT: u64 = 0x632b_e59b_d9b4_e019;

/// SplitMix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitRng {
    key: u64,
    counter: u64,
}

impl SplitRng {
    pub fn new(key: u64) -> Self {
        SplitRng { key, counter: 0 }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    /// Independent child stream labelled by `index`. Does not advance `self`.
    pub fn split(&self, index: u64) -> Self {
        SplitRng::new(mix64(self.key ^ mix64(index.wrapping_add(SPLIT_SALT))))
    }

    /// Output at absolute position `index` of this stream.
    pub fn at(&self, index: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)),
        )
    }
}

/// Seed derived from a root seed and a path of labels.
pub fn derive_seed(root: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(SplitRng::new(root), |rng, &label| rng.split(label))
        .key()
}

impl RngCore for SplitRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let out = self.at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        out
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
