use rayon::prelude::*;

use super::Workers;
use crate::error::{Error, Result};

/// Runs `trial(0..trials)` on a pool of the requested size and returns the
/// results in trial order. The first failing trial (by index) wins.
pub fn run_trials<T, F>(trials: usize, workers: Workers, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Workers::Fixed(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<T>> =
        pool.install(|| (0..trials as u64).into_par_iter().map(&trial).collect());
    results.into_iter().collect()
}

const PAIRWISE_BLOCK: usize = 8;

/// Sum in a fixed binary tree over the slice, independent of scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Sample mean and its standard error (sample standard deviation / √n).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stat {
    pub mean: f64,
    pub stderr: f64,
}

impl Stat {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self::default();
        }
        let mean = pairwise_sum(xs) / n as f64;
        if n == 1 {
            return Self { mean, stderr: 0.0 };
        }
        let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
        let var = pairwise_sum(&dev) / (n - 1) as f64;
        Self {
            mean,
            stderr: (var / n as f64).sqrt(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }
}
