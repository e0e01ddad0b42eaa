//! Counter-based random streams.
//!
//! Resampling code assigns stream id = replicate index, so every replicate's
//! draws are independent of execution order and worker count.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::NumericsError;

/// A deterministic random stream identified by (seed, stream id).
///
/// Draws are a pure function of (seed, stream, draw position); distinct
/// stream ids yield independent-quality sequences.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// A fresh stream with the same seed and a different stream id.
    pub fn substream(&self, stream: u64) -> Self {
        Self::new(self.seed, stream)
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// One Beta(a, b) variate via the gamma-ratio method: X/(X+Y) with
/// X ~ Gamma(a, 1), Y ~ Gamma(b, 1).
pub fn sample_beta(a: f64, b: f64, stream: &mut RngStream) -> Result<f64, NumericsError> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(NumericsError::Domain {
            what: "sample_beta requires positive shapes",
            value: if a > 0.0 { b } else { a },
        });
    }
    let ga = Gamma::new(a, 1.0).map_err(|_| NumericsError::Domain {
        what: "gamma shape rejected",
        value: a,
    })?;
    let gb = Gamma::new(b, 1.0).map_err(|_| NumericsError::Domain {
        what: "gamma shape rejected",
        value: b,
    })?;
    let x: f64 = ga.sample(stream);
    let y: f64 = gb.sample(stream);
    // Keep the draw strictly interior so downstream odds ratios stay finite.
    Ok((x / (x + y)).clamp(1e-15, 1.0 - 1e-15))
}
