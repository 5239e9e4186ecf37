//! Normalized spectral clustering and label-alignment consistency.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::eigh;

/// RNG stream reserved for k-means seeding.
const KMEANS_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iterations: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 300,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub labels: Vec<usize>,
    pub inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd iterations from k-means++ seeds; the lowest-inertia restart wins,
/// earlier restarts winning ties.
pub fn kmeans(points: &[Vec<f64>], k: usize, cfg: KMeansConfig, rng: &mut ChaCha8Rng) -> Result<KMeansFit> {
    if k == 0 || k > points.len() {
        return Err(Error::InvalidConfig(format!("k = {k} for {} points", points.len())));
    }
    let mut best: Option<KMeansFit> = None;
    for _ in 0..cfg.restarts.max(1) {
        let fit = lloyd(points, plus_plus_seeds(points, k, rng), cfg.max_iterations);
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn plus_plus_seeds(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centers = vec![points[rng.random_range(0..n)].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centers.push(points[pick].clone());
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &centers[centers.len() - 1]));
        }
    }
    centers
}

fn nearest(p: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centers.iter().enumerate() {
        let d = sq_dist(p, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn lloyd(points: &[Vec<f64>], mut centers: Vec<Vec<f64>>, max_iterations: usize) -> KMeansFit {
    let dim = points[0].len();
    let mut labels = vec![usize::MAX; points.len()];
    for _ in 0..max_iterations {
        let mut changed = false;
        for (l, p) in labels.iter_mut().zip(points) {
            let (c, _) = nearest(p, &centers);
            changed |= *l != c;
            *l = c;
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; centers.len()];
        let mut counts = vec![0usize; centers.len()];
        for (&l, p) in labels.iter().zip(points) {
            counts[l] += 1;
            sums[l].iter_mut().zip(p).for_each(|(s, x)| *s += x);
        }
        for ((center, sum), &count) in centers.iter_mut().zip(sums).zip(&counts) {
            // An emptied cluster keeps its previous center.
            if count > 0 {
                *center = sum.into_iter().map(|s| s / count as f64).collect();
            }
        }
    }
    let inertia = points.iter().map(|p| nearest(p, &centers).1).sum();
    let labels = points.iter().map(|p| nearest(p, &centers).0).collect();
    KMeansFit { labels, inertia }
}

/// Ng–Jordan–Weiss clustering of a weight matrix. The diagonal is ignored
/// and negative entries (possible in lossy reconstructions) are clipped to
/// zero before forming `I − D^{-1/2} W D^{-1/2}`.
pub fn spectral_clustering(w: &DMatrix<f64>, k: usize, seed: u64) -> Result<Vec<usize>> {
    spectral_clustering_with(w, k, seed, KMeansConfig::default())
}

pub fn spectral_clustering_with(w: &DMatrix<f64>, k: usize, seed: u64, cfg: KMeansConfig) -> Result<Vec<usize>> {
    let n = w.nrows();
    if w.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.ncols() });
    }
    if k < 2 || k > n {
        return Err(Error::InvalidConfig(format!("cluster count {k} outside 2..={n}")));
    }
    let a = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { w[(i, j)].max(0.0) });
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|i| {
            let d = a.row(i).sum();
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let l = DMatrix::from_fn(n, n, |i, j| {
        let off = -a[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
        if i == j {
            1.0 + off
        } else {
            off
        }
    });
    // Exact symmetry for the eigensolver check.
    let l = (&l + l.transpose()) * 0.5;
    let eig = eigh(&l)?;
    let points: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let row: Vec<f64> = (0..k).map(|c| eig.vectors[(i, c)]).collect();
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter().map(|x| x / norm).collect()
            } else {
                row
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(KMEANS_STREAM);
    Ok(kmeans(&points, k, cfg, &mut rng)?.labels)
}

/// Assignment maximizing `Σ weight[r][assign[r]]` over a square matrix
/// (Hungarian algorithm with potentials, O(n³)).
pub fn max_weight_assignment(weight: &[Vec<f64>]) -> Vec<usize> {
    let n = weight.len();
    if n == 0 {
        return Vec::new();
    }
    let max = weight.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let cost = |i: usize, j: usize| max - weight[i - 1][j - 1];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    assign
}

/// Fraction of nodes whose labels agree after the best one-to-one
/// relabeling of `reconstructed` onto `reference`.
pub fn cluster_consistency(reference: &[usize], reconstructed: &[usize]) -> Result<f64> {
    if reference.len() != reconstructed.len() {
        return Err(Error::DimensionMismatch {
            expected: reference.len(),
            got: reconstructed.len(),
        });
    }
    if reference.is_empty() {
        return Err(Error::InvalidConfig("empty labelings".into()));
    }
    let k = reference.iter().chain(reconstructed).max().expect("non-empty") + 1;
    let mut confusion = vec![vec![0.0; k]; k];
    for (&a, &b) in reference.iter().zip(reconstructed) {
        confusion[a][b] += 1.0;
    }
    let assign = max_weight_assignment(&confusion);
    let agree: f64 = assign.iter().enumerate().map(|(a, &b)| confusion[a][b]).sum();
    Ok(agree / reference.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn hungarian_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=6 {
            for _ in 0..20 {
                let w: Vec<Vec<f64>> = (0..n)
                    .map(|_| (0..n).map(|_| rng.random_range(0..10) as f64).collect())
                    .collect();
                let got: f64 = max_weight_assignment(&w).iter().enumerate().map(|(i, &j)| w[i][j]).sum();
                let best = permutations(n)
                    .iter()
                    .map(|p| p.iter().enumerate().map(|(i, &j)| w[i][j]).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(got, best);
            }
        }
    }

    #[test]
    fn consistency_examples() {
        let a = vec![0, 0, 1, 1, 2, 2];
        assert_eq!(cluster_consistency(&a, &a).unwrap(), 1.0);
        let renamed: Vec<usize> = a.iter().map(|&l| (l + 1) % 3).collect();
        assert_eq!(cluster_consistency(&a, &renamed).unwrap(), 1.0);
        let half = [0, 0, 1, 1];
        assert_eq!(cluster_consistency(&half, &[0, 1, 1, 0]).unwrap(), 0.5);
        assert!(cluster_consistency(&a, &a[..3]).is_err());
    }

    #[test]
    fn two_cliques_separate() {
        let n = 10;
        let w = DMatrix::from_fn(n, n, |i, j| if i != j && (i < 5) == (j < 5) { 1.0 } else { 0.0 });
        let labels = spectral_clustering(&w, 2, 0).unwrap();
        let truth: Vec<usize> = (0..n).map(|i| usize::from(i >= 5)).collect();
        assert_eq!(cluster_consistency(&truth, &labels).unwrap(), 1.0);
        assert_eq!(labels, spectral_clustering(&w, 2, 0).unwrap());
    }
}
