#![allow(dead_code)]

use gwac::UGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random graph on `2..=max_n` nodes with at least one edge and weights in
/// `[0.1, 2)`.
pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> UGraph {
    let n = rng.random_range(2..=max_n);
    let p: f64 = rng.random_range(0.05..0.6);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((i, j, rng.random_range(0.1..2.0)));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, n - 1, 1.0));
    }
    UGraph::new(n, edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = a.iter().map(|x| x * x).sum();
    (num / den).sqrt()
}
