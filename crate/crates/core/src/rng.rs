//! Deterministic random streams.
//!
//! Every Monte Carlo draw in the crate comes from ChaCha8 seeded with the
//! user seed and switched to the stream numbered by the replicate index.
//! Replicate `i` therefore sees the same random numbers whatever thread
//! evaluates it and however the replicates are chunked.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform draw in the open interval (0, 1).
#[inline]
pub fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Standard exponential variate.
#[inline]
pub fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -open01(rng).ln()
}
