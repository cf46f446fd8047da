//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a stream addressed by a
//! [`StreamKey`]: a master seed, a purpose tag and up to three indices
//! (outer cell, inner replicate, bootstrap replicate). The key is turned into
//! a ChaCha8 key/stream pair, so the numbers a replicate sees depend only on
//! its address and never on which worker thread evaluates it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The concrete generator handed to samplers.
pub type Stream = ChaCha8Rng;

/// What a stream is used for. Distinct tags never share numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Purpose {
    Weights,
    Data,
    Replicates,
    Generalized,
    Misc,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Weights => 0x5745_4947_4854_5331,
            Purpose::Data => 0x4441_5441_5f5f_5f31,
            Purpose::Replicates => 0x5245_504c_4943_4131,
            Purpose::Generalized => 0x4745_4e45_5241_4c31,
            Purpose::Misc => 0x4d49_5343_5f5f_5f31,
        }
    }
}

const MAX_DEPTH: usize = 3;

/// Address of a random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    seed: u64,
    purpose: Purpose,
    path: [u64; MAX_DEPTH],
    depth: usize,
}

impl StreamKey {
    pub fn new(seed: u64, purpose: Purpose) -> Self {
        Self {
            seed,
            purpose,
            path: [0; MAX_DEPTH],
            depth: 0,
        }
    }

    /// Descend one level. Panics past three levels.
    pub fn at(self, index: u64) -> Self {
        assert!(self.depth < MAX_DEPTH, "stream key path is limited to {MAX_DEPTH} levels");
        let mut next = self;
        next.path[self.depth] = index;
        next.depth += 1;
        next
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn purpose(&self) -> Purpose {
        self.purpose
    }

    /// Materialize the generator for this address.
    pub fn stream(&self) -> Stream {
        let mut key = [0u8; 32];
        // The depth is folded into the tag so that (a) and (a, 0) differ.
        let tag = self.purpose.tag() ^ ((self.depth as u64) << 56);
        for (chunk, word) in key
            .chunks_exact_mut(8)
            .zip([self.seed, tag, self.path[0], self.path[1]])
        {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.path[2]);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn first(key: StreamKey) -> u64 {
        key.stream().random()
    }

    #[test]
    fn same_address_same_numbers() {
        let k = StreamKey::new(7, Purpose::Data).at(3).at(4);
        assert_eq!(first(k), first(k));
    }

    #[test]
    fn addresses_are_distinct() {
        let base = StreamKey::new(7, Purpose::Data);
        let values = [
            first(base),
            first(base.at(0)),
            first(base.at(0).at(0)),
            first(base.at(1)),
            first(base.at(0).at(1)),
            first(base.at(0).at(0).at(1)),
            first(StreamKey::new(7, Purpose::Weights)),
            first(StreamKey::new(8, Purpose::Data)),
        ];
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                assert_ne!(values[i], values[j], "{i} vs {j}");
            }
        }
    }

    #[test]
    #[should_panic]
    fn depth_is_bounded() {
        let _ = StreamKey::new(1, Purpose::Misc).at(0).at(0).at(0).at(0);
    }
}
