//! Seeded synthetic graph generators.
//!
//! All randomness comes from ChaCha8 seeded with `seed_from_u64`, so a
//! `(kind, params, seed)` triple yields the same graph on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::graph::UGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    /// Uniform points in the unit square, k-nearest-neighbor union.
    Sensor,
    /// Planted partition with equal blocks.
    Community,
    /// Uniform points in the unit cube, k-nearest-neighbor union.
    Knn,
    ErdosRenyi,
}

impl GraphKind {
    pub const ALL: [GraphKind; 4] = [
        GraphKind::Sensor,
        GraphKind::Community,
        GraphKind::Knn,
        GraphKind::ErdosRenyi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Sensor => "sensor",
            GraphKind::Community => "community",
            GraphKind::Knn => "knn",
            GraphKind::ErdosRenyi => "er",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "sensor" => Some(GraphKind::Sensor),
            "community" => Some(GraphKind::Community),
            "knn" => Some(GraphKind::Knn),
            "er" | "erdos-renyi" | "erdos_renyi" => Some(GraphKind::ErdosRenyi),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub sensor_k: usize,
    pub knn_k: usize,
    pub communities: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub er_p: f64,
    pub weight_mean: f64,
    pub weight_sd: f64,
    /// Upper end of the weight support `(0, weight_max]`.
    pub weight_max: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            sensor_k: 6,
            knn_k: 15,
            communities: 5,
            p_in: 0.185,
            p_out: 0.002,
            er_p: 0.05,
            weight_mean: 1.0,
            weight_sd: 0.5,
            weight_max: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub kind: GraphKind,
    pub n: usize,
    pub params: GenParams,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(kind: GraphKind, seed: u64) -> Self {
        Self {
            kind,
            n: 500,
            params: GenParams::default(),
            seed,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    fn validate(&self) -> Result<()> {
        let p = &self.params;
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n < 2 {
            return bad(format!("graph needs at least 2 nodes, got {}", self.n));
        }
        match self.kind {
            GraphKind::Sensor if p.sensor_k == 0 || p.sensor_k >= self.n => {
                bad(format!("sensor k = {} must lie in 1..{}", p.sensor_k, self.n))
            }
            GraphKind::Knn if p.knn_k == 0 || p.knn_k >= self.n => {
                bad(format!("knn k = {} must lie in 1..{}", p.knn_k, self.n))
            }
            GraphKind::Community if p.communities == 0 || p.communities > self.n => {
                bad(format!("{} communities for {} nodes", p.communities, self.n))
            }
            GraphKind::Community if !unit(p.p_in) || !unit(p.p_out) => {
                bad(format!("block probabilities {} / {} outside [0, 1]", p.p_in, p.p_out))
            }
            GraphKind::ErdosRenyi if !unit(p.er_p) => bad(format!("edge probability {} outside [0, 1]", p.er_p)),
            _ if !(p.weight_sd > 0.0 && p.weight_max > 0.0) => bad("weight distribution is degenerate".into()),
            _ => Ok(()),
        }
    }
}

fn unit(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

pub fn generate(spec: &GenSpec) -> Result<UGraph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let p = &spec.params;
    let n = spec.n;
    let edges = match spec.kind {
        GraphKind::Sensor => knn_union(&random_points::<2>(n, &mut rng), p.sensor_k),
        GraphKind::Knn => knn_union(&random_points::<3>(n, &mut rng), p.knn_k),
        GraphKind::Community => {
            let block = block_labels(n, p.communities);
            bernoulli_pairs(n, &mut rng, |i, j| if block[i] == block[j] { p.p_in } else { p.p_out })
        }
        GraphKind::ErdosRenyi => bernoulli_pairs(n, &mut rng, |_, _| p.er_p),
    };
    let weights = truncated_normal(edges.len(), p.weight_mean, p.weight_sd, p.weight_max, &mut rng)?;
    UGraph::new(n, edges.into_iter().zip(weights).map(|((i, j), w)| (i, j, w)))
}

/// Planted block of each node: contiguous, sizes differing by at most one.
pub fn block_labels(n: usize, blocks: usize) -> Vec<usize> {
    (0..n).map(|i| i * blocks / n).collect()
}

fn random_points<const D: usize>(n: usize, rng: &mut ChaCha8Rng) -> Vec<[f64; D]> {
    (0..n)
        .map(|_| std::array::from_fn(|_| rng.random::<f64>()))
        .collect()
}

/// Union of each point's `k` nearest neighbors; distance ties go to the
/// lower index.
fn knn_union<const D: usize>(points: &[[f64; D]], k: usize) -> Vec<(usize, usize)> {
    let mut edges = std::collections::BTreeSet::new();
    let mut dist: Vec<(f64, usize)> = Vec::with_capacity(points.len());
    for (i, a) in points.iter().enumerate() {
        dist.clear();
        dist.extend(points.iter().enumerate().filter(|&(j, _)| j != i).map(|(j, b)| {
            let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            (d, j)
        }));
        let by_distance = |x: &(f64, usize), y: &(f64, usize)| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1));
        dist.select_nth_unstable_by(k - 1, by_distance);
        for &(_, j) in &dist[..k] {
            edges.insert((i.min(j), i.max(j)));
        }
    }
    edges.into_iter().collect()
}

/// One uniform draw per pair `i < j` in lexicographic order.
fn bernoulli_pairs<F>(n: usize, rng: &mut ChaCha8Rng, prob: F) -> Vec<(usize, usize)>
where
    F: Fn(usize, usize) -> f64,
{
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < prob(i, j) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Normal(mean, sd) samples restricted to `(0, max]` by rejection.
pub fn truncated_normal(count: usize, mean: f64, sd: f64, max: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let normal = Normal::new(mean, sd).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok((0..count)
        .map(|_| loop {
            let w = normal.sample(rng);
            if w > 0.0 && w <= max {
                break w;
            }
        })
        .collect())
}
