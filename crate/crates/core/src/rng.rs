//! Splittable, seeded randomness.
//!
//! Every randomized component receives its own child stream derived from a
//! parent key and a call-site label. Child derivation depends only on the
//! parent key, never on how much of the parent stream was consumed, so adding
//! a draw in one place does not perturb any other stream.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct RandomSource {
    key: [u8; 32],
    label: String,
    rng: ChaCha12Rng,
}

impl RandomSource {
    pub fn from_seed(seed: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(b"plearn-root");
        hasher.update(seed.to_le_bytes());
        Self::from_key(hasher.finalize().into(), format!("root:{seed}"))
    }

    fn from_key(key: [u8; 32], label: String) -> Self {
        RandomSource {
            key,
            label,
            rng: ChaCha12Rng::from_seed(key),
        }
    }

    /// Child stream for a named call site.
    pub fn child(&self, label: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(self.key);
        hasher.update((label.len() as u64).to_le_bytes());
        hasher.update(label.as_bytes());
        Self::from_key(hasher.finalize().into(), format!("{}/{}", self.label, label))
    }

    /// Child stream for the `index`-th repetition of a call site.
    pub fn child_indexed(&self, label: &str, index: u64) -> Self {
        self.child(&format!("{label}#{index}"))
    }

    /// Full path of labels from the root seed to this stream.
    pub fn label(&self) -> &str {
        &self.label
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
