//! Seeded standard complex Gaussian streams.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic stream of complex Gaussians with independent real and
/// imaginary parts drawn from N(0, ½), so E|z|² = 1.
///
/// Streams are value types. Parallel work derives independent streams from
/// one seed with [`ComplexGaussianStream::with_stream`].
#[derive(Debug, Clone)]
pub struct ComplexGaussianStream {
    rng: ChaCha8Rng,
}

/// Shorthand for [`ComplexGaussianStream::new`].
pub fn gaussian_rng(seed: u64) -> ComplexGaussianStream {
    ComplexGaussianStream::new(seed)
}

impl ComplexGaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The `stream`-th independent substream of `seed`.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn next_complex(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Uniform draw from [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }
}

impl Iterator for ComplexGaussianStream {
    type Item = Complex64;

    fn next(&mut self) -> Option<Complex64> {
        Some(self.next_complex())
    }
}
