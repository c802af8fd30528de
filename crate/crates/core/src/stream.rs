//! Reproducible random streams.
//!
//! Every sampling operation takes a [`UnitStream`], a value type naming one
//! deterministic sequence of uniform variates. Equal `(seed, stream_id)`
//! pairs yield bit-identical sequences on every platform; distinct stream
//! ids yield statistically independent sequences.
//!
//! The mapping is fixed so that runs can be reproduced across machines:
//! the generator is ChaCha8 keyed with `seed_from_u64(seed)` (the SplitMix64
//! key expansion used by `rand`) and its 64-bit stream word set to
//! `stream_id`. Child streams are derived with SplitMix64 over
//! `stream_id XOR salt` (see [`UnitStream::child`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name of one reproducible stream of uniform variates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitStream {
    pub seed: u64,
    pub stream_id: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl UnitStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        UnitStream { seed, stream_id }
    }

    /// Instantiate the generator this stream names.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Derive an independent child stream. Children with distinct salts are
    /// independent of each other and of the parent; the derivation is
    /// `stream_id' = splitmix64(stream_id XOR splitmix64(salt + 1))`.
    pub fn child(&self, salt: u64) -> UnitStream {
        UnitStream {
            seed: self.seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(salt.wrapping_add(1))),
        }
    }
}

/// Draw `Exp(rate)` via inversion. Callers guarantee `rate > 0`.
pub(crate) fn exp_gap<R: Rng>(rng: &mut R, rate: f64) -> f64 {
    // 1 - U in (0, 1], so the logarithm is finite.
    let u: f64 = rng.gen::<f64>();
    -(-u).ln_1p() / rate
}
