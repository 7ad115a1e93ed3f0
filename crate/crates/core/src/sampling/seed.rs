use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Seed provenance for a batch or a path.
///
/// The generator is ChaCha8 keyed by `master_seed`, with `stream_id`
/// selecting one of its 2^64 independent streams. Identical
/// `(master_seed, stream_id)` always reproduce the same sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub const fn new(master_seed: u64, stream_id: u64) -> Self {
        SeedSpec {
            master_seed,
            stream_id,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Leaf stream `index` under this stream: stream id `(stream_id << 32) | index`.
    ///
    /// Parent ids must stay below 2^32 so that children of distinct parents
    /// never collide.
    pub fn child(&self, index: u32) -> SeedSpec {
        assert!(
            self.stream_id < (1 << 32),
            "stream {} is already a leaf stream",
            self.stream_id
        );
        SeedSpec {
            master_seed: self.master_seed,
            stream_id: (self.stream_id << 32) | u64::from(index),
        }
    }

    /// Sibling top-level stream, for splitting one experiment into parts.
    pub fn with_stream(&self, stream_id: u64) -> SeedSpec {
        SeedSpec {
            master_seed: self.master_seed,
            stream_id,
        }
    }
}
