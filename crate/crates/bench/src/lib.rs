//! Fixtures shared by the criterion benchmarks.

use ntn_core::geometry::Ball;
use ntn_core::pointprocess::{sample_ppp, PointSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Candidate PPP in the default 10 km deployment ball.
pub fn candidate_cloud(seed: u64, lambda1: f64) -> PointSet {
    sample_ppp(&mut rng(seed), lambda1, &Ball::centered(10e3))
}
