//! Order-deterministic parallel sample moments.
//!
//! Samples are grouped into fixed-size chunks that are reduced serially and
//! then merged in chunk order, so the floating-point result does not depend on
//! the number of worker threads.

use rayon::prelude::*;

use crate::error::Result;

const CHUNK: u64 = 2048;

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64 * other.n as f64 / n as f64);
        self.n = n;
    }

    /// Sample variance with `n − 1` in the denominator.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// Moments of `width` statistics over samples `0..n`. `sample(i, out)` fills
/// `out` with the statistics of sample `i`.
pub fn par_moments<F>(n: u64, width: usize, sample: F) -> Result<Vec<Moments>>
where
    F: Fn(u64, &mut [f64]) -> Result<()> + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<Vec<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![Moments::default(); width];
            let mut buf = vec![0.0; width];
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                sample(i, &mut buf)?;
                for (m, &x) in acc.iter_mut().zip(&buf) {
                    m.push(x);
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![Moments::default(); width];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    Ok(total)
}
