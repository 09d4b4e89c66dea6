//! Splittable deterministic random streams.
//!
//! Every sampler in this crate is a pure function of an explicit stream, so a
//! `(seed, stream_id)` pair fully determines a sample sequence. Distinct
//! stream ids select distinct ChaCha streams, which are independent by
//! construction of the generator.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Descriptor of a deterministic random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngState {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngState {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngState { seed, stream_id }
    }

    /// Derive a substream by a fixed tag. Substreams of distinct tags are
    /// independent streams of the same seed.
    pub fn substream(self, tag: u64) -> Self {
        RngState {
            seed: self.seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(tag.wrapping_add(0x9e37_79b9_7f4a_7c15))),
        }
    }

    /// Instantiate the concrete generator for this stream.
    pub fn stream(self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        StreamRng { rng }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Concrete generator for one stream.
#[derive(Debug, Clone)]
pub struct StreamRng {
    rng: ChaCha8Rng,
}

impl StreamRng {
    /// Uniform draw from the open interval (0,1).
    ///
    /// Exact 0 bit patterns are rejected (1.0 cannot occur with 53-bit
    /// mantissa scaling), because several samplers evaluate log or the
    /// Kanter function at the draw, and both are singular at the endpoints.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let x = (self.rng.next_u64() >> 11) as f64 * 1.1102230246251565e-16; // 2^-53
            if x > 0.0 {
                return x;
            }
        }
    }
}

impl RngCore for StreamRng {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
