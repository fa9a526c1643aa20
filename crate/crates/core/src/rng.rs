//! Seeded randomness.
//!
//! Every random stream is a ChaCha8 generator keyed by a labeled hash of the
//! user seed: `SHA-256(label || 0x00 || seed_le || path_le...)`. Streams that
//! are consumed per sample use the ChaCha stream id as the sample counter, so
//! draw `i` is a pure function of `(seed, label, i)` and does not depend on how
//! the work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Key material for `label` under `seed`, refined by `path`.
pub fn derive_key(seed: u64, label: &str, path: &[u64]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(label.as_bytes());
    hasher.update([0u8]);
    hasher.update(seed.to_le_bytes());
    for p in path {
        hasher.update(p.to_le_bytes());
    }
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    key
}

/// Derived 64-bit sub-seed, for handing to another seeded operation.
pub fn derive_seed(seed: u64, label: &str, path: &[u64]) -> u64 {
    let key = derive_key(seed, label, path);
    u64::from_le_bytes(key[..8].try_into().unwrap())
}

/// Generator for `label` under `seed`.
pub fn stream(seed: u64, label: &str, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(derive_key(seed, label, path))
}

/// Generator for sample `index` of the labeled family.
pub fn indexed_stream(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut rng = stream(seed, label, &[]);
    rng.set_stream(index);
    rng
}

/// Neumaier's compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
