use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// The shared randomness of one kernel application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepNoise {
    /// Coordinate to update, uniform on `0..d`.
    pub index: usize,
    /// Uniform variate in `(0, 1)` fed to the truncated-normal quantile.
    pub u: f64,
}

/// 32-bit words consumed per [`StepNoise`].
pub const WORDS_PER_STEP: u128 = 4;

/// A reproducible random stream keyed by `(seed, replica)`.
///
/// Backed by ChaCha8 with the replica as the stream id, so distinct replicas
/// read disjoint keystreams and any position can be revisited with
/// [`NoiseStream::seek`]. Each step reads exactly two 64-bit words: first the
/// index, then the uniform.
#[derive(Debug, Clone)]
pub struct NoiseStream {
    rng: ChaCha8Rng,
    seed: u64,
    replica: u64,
}

pub fn make_noise_stream(seed: u64, replica: u64) -> NoiseStream {
    NoiseStream::new(seed, replica)
}

impl NoiseStream {
    pub fn new(seed: u64, replica: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replica);
        Self { rng, seed, replica }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replica(&self) -> u64 {
        self.replica
    }

    #[inline]
    pub fn next_noise(&mut self, d: usize) -> StepNoise {
        let index = self.next_index(d);
        let u = self.next_uniform();
        StepNoise { index, u }
    }

    /// Uniform on `0..d` by the multiply-shift map (bias below `d / 2⁶⁴`).
    #[inline]
    pub fn next_index(&mut self, d: usize) -> usize {
        let x = self.rng.next_u64();
        ((u128::from(x) * d as u128) >> 64) as usize
    }

    /// `(m + ½)·2⁻⁵²` for a uniform 52-bit `m`: never 0 or 1, and `1 − u` is
    /// exactly representable, so reflected noise is exact.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        let m = self.rng.next_u64() >> 12;
        (m as f64 + 0.5) * f64::from_bits(0x3CB0_0000_0000_0000)
    }

    /// Position in 32-bit words from the start of this stream.
    pub fn position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    pub fn seek(&mut self, position: u128) {
        self.rng.set_word_pos(position);
    }
}
