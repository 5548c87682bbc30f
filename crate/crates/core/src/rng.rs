//! Seedable, splittable pseudo-random source.
//!
//! Every consumer of randomness (voter selection, peer assignment, agent
//! behaviour) receives a [`RandomSource`] explicitly. A source can derive
//! independent child streams by label without consuming its own state, so a
//! root seed fans out deterministically into per-repetition streams.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The seed this source was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives an independent child source identified by `label`.
    ///
    /// The result depends only on this source's seed and the label, never on
    /// how much of this source has already been consumed.
    pub fn derive(&self, label: u64) -> RandomSource {
        let mut base = ChaCha8Rng::seed_from_u64(self.seed);
        // stream 0 is the parent's own sequence
        base.set_stream(label.wrapping_add(1));
        RandomSource::new(base.next_u64())
    }

    /// Uniform index in `0..len`. Samples through `u64` so results do not
    /// depend on the platform's pointer width.
    pub fn index(&mut self, len: usize) -> usize {
        assert!(len > 0, "cannot sample from an empty range");
        self.rng.gen_range(0..len as u64) as usize
    }

    /// Bernoulli trial with success probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        if p >= 1.0 {
            return true;
        }
        if p <= 0.0 {
            return false;
        }
        self.rng.gen::<f64>() < p
    }

    pub fn fill(&mut self, buf: &mut [u8]) {
        self.rng.fill_bytes(buf);
    }
}

impl RngCore for RandomSource {
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
