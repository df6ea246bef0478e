//! Random streams. Every trial owns an independent ChaCha8 stream selected by
//! `(seed, trial index)`, so results do not depend on how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

/// Stream `trial` of the counter-based generator keyed by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Exponential variate with the given mean, by inversion of a uniform on the
/// open interval `(0, 1)`; the result is strictly positive for positive `mean`.
#[inline]
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    loop {
        let u = rng.random::<f64>();
        if u > 0.0 {
            return -mean * u.ln();
        }
    }
}

#[inline]
pub fn uniform_index<R: Rng + ?Sized>(rng: &mut R, len: usize) -> usize {
    rng.random_range(0..len)
}
