//! Reconstruction and diffusion SNR.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::UGraph;
use crate::linalg::{eigh, EigenPair};

/// RNG stream reserved for diffusion inputs.
const DIFFUSION_STREAM: u64 = 1;

/// Decay rate of the heat kernel `h(λ) = e^{−τλ}`.
pub const DIFFUSION_TAU: f64 = 5.0;

/// `20 log10(‖ref‖ / ‖ref − rec‖)`; `+∞` when the two agree exactly.
pub fn snr(reference: &[f64], reconstructed: &[f64]) -> Result<f64> {
    if reference.len() != reconstructed.len() {
        return Err(Error::DimensionMismatch {
            expected: reference.len(),
            got: reconstructed.len(),
        });
    }
    let signal = reference.iter().map(|x| x * x).sum::<f64>().sqrt();
    if signal == 0.0 {
        return Err(Error::ZeroReference);
    }
    let noise = reference
        .iter()
        .zip(reconstructed)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(if noise == 0.0 {
        f64::INFINITY
    } else {
        20.0 * (signal / noise).log10()
    })
}

/// Heat diffusion `U h(Λ) Uᵀ` on the combinatorial Laplacian `D − W` of a
/// (possibly lossy, dense) weight matrix. The diagonal of W cancels in
/// `D − W` and therefore has no effect.
#[derive(Debug, Clone)]
pub struct Diffusion {
    eig: EigenPair,
}

impl Diffusion {
    pub fn from_weights(w: &DMatrix<f64>) -> Result<Self> {
        if w.nrows() != w.ncols() {
            return Err(Error::DimensionMismatch {
                expected: w.nrows(),
                got: w.ncols(),
            });
        }
        let n = w.nrows();
        let mut l = -w.clone();
        for i in 0..n {
            l[(i, i)] += w.row(i).sum();
        }
        Ok(Self { eig: eigh(&l)? })
    }

    pub fn from_graph(g: &UGraph) -> Result<Self> {
        Self::from_weights(&g.weighted_adjacency().to_dense())
    }

    pub fn len(&self) -> usize {
        self.eig.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: x.len(),
            });
        }
        Ok(self.eig.apply_spectral(|l| (-DIFFUSION_TAU * l).exp(), x))
    }
}

pub fn diffuse(g: &UGraph, x: &[f64]) -> Result<Vec<f64>> {
    Diffusion::from_graph(g)?.apply(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffusionConfig {
    pub trials: usize,
    /// Number of entries set to one in each input.
    pub ones: usize,
}

impl Default for DiffusionConfig {
    fn default() -> Self {
        Self { trials: 20, ones: 100 }
    }
}

/// Sparse binary diffusion inputs, a pure function of `(n, cfg, seed)`, so
/// every method is compared on the same inputs.
pub fn diffusion_inputs(n: usize, cfg: DiffusionConfig, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n < cfg.ones {
        return Err(Error::InvalidConfig(format!(
            "diffusion needs at least {} nodes, got {n}",
            cfg.ones
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(DIFFUSION_STREAM);
    Ok((0..cfg.trials)
        .map(|_| {
            let mut x = vec![0.0; n];
            for i in rand::seq::index::sample(&mut rng, n, cfg.ones) {
                x[i] = 1.0;
            }
            x
        })
        .collect())
}

/// Mean over trials of `snr(diffuse(ref, x), diffuse(rec, x))` in dB.
pub fn diffusion_snr(reference: &Diffusion, reconstructed: &Diffusion, cfg: DiffusionConfig, seed: u64) -> Result<f64> {
    if reference.len() != reconstructed.len() {
        return Err(Error::DimensionMismatch {
            expected: reference.len(),
            got: reconstructed.len(),
        });
    }
    let inputs = diffusion_inputs(reference.len(), cfg, seed)?;
    let mut total = 0.0;
    for x in &inputs {
        total += snr(&reference.apply(x)?, &reconstructed.apply(x)?)?;
    }
    Ok(total / inputs.len().max(1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_examples() {
        let r = [3.0, 4.0];
        assert_eq!(snr(&r, &r).unwrap(), f64::INFINITY);
        assert!((snr(&r, &[1.5, 2.0]).unwrap() - 20.0 * 2f64.log10()).abs() < 1e-12);
        assert!(snr(&r, &[0.0, 0.0]).unwrap().abs() < 1e-12);
        assert!(matches!(snr(&[0.0], &[1.0]), Err(Error::ZeroReference)));
        assert!(snr(&r, &[1.0]).is_err());
    }

    #[test]
    fn diffusion_edge_cases() {
        let g = UGraph::new(4, []).unwrap();
        assert_eq!(diffuse(&g, &[1.0, 0.0, 2.0, 0.0]).unwrap(), vec![1.0, 0.0, 2.0, 0.0]);
        let g = UGraph::new(3, [(0, 1, 1.0), (1, 2, 0.5)]).unwrap();
        let y = diffuse(&g, &[0.0; 3]).unwrap();
        assert!(y.iter().all(|&v| v.abs() < 1e-15));
        let y = diffuse(&g, &[1.0, 0.0, 0.0]).unwrap();
        assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inputs_are_seeded_and_sparse() {
        let cfg = DiffusionConfig { trials: 3, ones: 5 };
        let a = diffusion_inputs(20, cfg, 9).unwrap();
        assert_eq!(a, diffusion_inputs(20, cfg, 9).unwrap());
        assert!(a.iter().all(|x| x.iter().sum::<f64>() == 5.0));
        assert!(diffusion_inputs(4, cfg, 9).is_err());
    }
}
