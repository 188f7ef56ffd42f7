//! Instance generators shared by the benchmarks.

use annulus_core::{DiskGraph, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` uniform points in a square sized so the disk graph is usually connected.
pub fn scatter(n: usize, seed: u64) -> Vec<Point> {
    let side = (n as f64).sqrt() * 0.7;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point::new(rng.random_range(0.0..side), rng.random_range(0.0..side))).collect()
}

/// First connected scatter found from `seed` onward.
pub fn connected_scatter(n: usize, seed: u64) -> DiskGraph {
    (seed..)
        .map(|s| DiskGraph::build(scatter(n, s)).expect("finite points"))
        .find(|g| g.is_connected())
        .expect("some seed gives a connected graph")
}
