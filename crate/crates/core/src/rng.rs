//! Counter-based standard-normal shocks.
//!
//! Path `p` owns ChaCha stream `p` under the master seed. Step `s` consumes
//! exactly two 64-bit words (Box-Muller, cosine branch), so the shock at
//! `(seed, p, s)` is a pure function of the triple and does not depend on how
//! paths are scheduled across workers.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORDS_PER_SHOCK: u128 = 4; // 32-bit words

pub struct ShockStream {
    rng: ChaCha8Rng,
}

impl ShockStream {
    pub fn new(seed: u64, path: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(path);
        ShockStream { rng }
    }

    /// Stream positioned so that the next draw is the shock of `step`.
    pub fn at_step(seed: u64, path: u64, step: u64) -> Self {
        let mut s = ShockStream::new(seed, path);
        s.rng.set_word_pos(step as u128 * WORDS_PER_SHOCK);
        s
    }

    pub fn next_normal(&mut self) -> f64 {
        // u1 in (0, 1], u2 in [0, 1)
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * f64::EPSILON / 2.0;
        let u2 = (self.rng.next_u64() >> 11) as f64 * f64::EPSILON / 2.0;
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// The shock used at `(path, step)` under `seed`.
pub fn shock(seed: u64, path: u64, step: u64) -> f64 {
    ShockStream::at_step(seed, path, step).next_normal()
}
