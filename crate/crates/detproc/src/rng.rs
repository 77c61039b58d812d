//! Reproducible random streams.
//!
//! Every Monte Carlo path or sample owns a ChaCha8 stream selected by
//! `(seed, index)`, so results do not depend on how work is spread over
//! threads. Parallel helpers collect results in index order.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::specfun::normal_quantile;

pub struct PathRng {
    inner: ChaCha8Rng,
}

impl PathRng {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        PathRng { inner }
    }

    /// Uniform on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    /// Standard normal by inversion.
    pub fn normal(&mut self) -> f64 {
        normal_quantile(self.uniform())
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.normal();
        }
    }

    /// Underlying generator, for `rand_distr` distributions.
    pub fn generator(&mut self) -> &mut impl Rng {
        &mut self.inner
    }
}

/// Runs `work(index, rng)` for `index in 0..count` in parallel, each with
/// its own stream, and returns the results in index order.
pub fn par_streams<R, F>(seed: u64, count: usize, work: F) -> crate::Result<Vec<R>>
where
    R: Send,
    F: Fn(u64, &mut PathRng) -> crate::Result<R> + Sync,
{
    (0..count as u64)
        .into_par_iter()
        .map(|i| work(i, &mut PathRng::new(seed, i)))
        .collect()
}
