//! Separable critically-sampled analysis/synthesis over Harary levels.
//!
//! Level `t` filters with `h(R_t) = D_t^{-1/2} h(T_t) D_t^{1/2}`, where
//! `T_t = I − D_t^{-1/2} S_t D_t^{-1/2}` is the normalized Laplacian of the
//! level-t subgraph of a signed coupling matrix `S` (degrees `D_t` are the
//! absolute row sums within the level) and `R_t = I − D_t^{-1} S_t` its
//! random-walk form. `R_t` annihilates constants on every non-isolated node
//! of a positively coupled level, so the highpass channels carry no DC.
//! Each level is bipartite with respect to the level-t bit, so its spectrum
//! folds about 1 and the complementary sampling of the two channels cancels
//! aliasing. Because
//! level-t edges never cross the partitions of earlier levels, the levels
//! commute with earlier samplings and all downsampling can be deferred to the
//! end of the cascade.

use super::design::BiorFilterBank;
use super::harary::BipartiteDecomposition;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Subband coefficients, channel `k` holding the samples of nodes whose used
/// level bits spell `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandCoefficients {
    pub channels: Vec<Vec<f64>>,
}

impl SubbandCoefficients {
    pub fn total_len(&self) -> usize {
        self.channels.iter().map(Vec::len).sum()
    }

    /// Channels concatenated in channel order.
    pub fn flatten(&self) -> Vec<f64> {
        self.channels.concat()
    }

    pub fn channel_lengths(&self) -> Vec<usize> {
        self.channels.iter().map(Vec::len).collect()
    }

    pub fn from_flat(flat: &[f64], lengths: &[usize]) -> Result<Self> {
        let total: usize = lengths.iter().sum();
        if total != flat.len() {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: flat.len(),
            });
        }
        let mut offset = 0;
        let channels = lengths
            .iter()
            .map(|&len| {
                let c = flat[offset..offset + len].to_vec();
                offset += len;
                c
            })
            .collect();
        Ok(Self { channels })
    }
}

/// A filter bank bound to one graph: level operators and sampling sets are
/// computed once and reused for every signal.
#[derive(Debug, Clone)]
pub struct GraphFilterBank {
    kernels: BiorFilterBank,
    levels: Vec<LevelOperator>,
    members: Vec<Vec<usize>>,
    n: usize,
}

impl GraphFilterBank {
    /// `couplings` holds the signed off-diagonal weights of the graph the
    /// decomposition was computed on; its diagonal is ignored.
    pub fn new(couplings: &SymMatrix, dec: &BipartiteDecomposition, kernels: &BiorFilterBank) -> Result<Self> {
        let n = couplings.dim();
        if dec.node_count() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: dec.node_count(),
            });
        }
        let levels = (0..dec.used_levels())
            .map(|t| level_operator(couplings, dec.level_edges(t)))
            .collect::<Result<Vec<_>>>()?;
        let mut members = vec![Vec::new(); dec.channel_count()];
        for v in 0..n {
            members[dec.channel_of(v)].push(v);
        }
        Ok(Self {
            kernels: kernels.clone(),
            levels,
            members,
            n,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn channel_count(&self) -> usize {
        self.members.len()
    }

    /// Node indices sampled into each channel, ascending.
    pub fn channel_members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn level_operators(&self) -> &[LevelOperator] {
        &self.levels
    }

    pub fn kernels(&self) -> &BiorFilterBank {
        &self.kernels
    }

    /// Undownsampled channel signals after the full filter cascade.
    pub fn analyze_full(&self, f: &[f64]) -> Result<Vec<Vec<f64>>> {
        if f.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: f.len(),
            });
        }
        let mut signals = vec![f.to_vec()];
        for op in &self.levels {
            signals = signals
                .iter()
                .flat_map(|s| [op.filter(&self.kernels.h0, s), op.filter(&self.kernels.h1, s)])
                .collect();
        }
        Ok(signals)
    }

    pub fn analyze(&self, f: &[f64]) -> Result<SubbandCoefficients> {
        let full = self.analyze_full(f)?;
        let channels = full
            .iter()
            .zip(&self.members)
            .map(|(s, nodes)| nodes.iter().map(|&v| s[v]).collect())
            .collect();
        Ok(SubbandCoefficients { channels })
    }

    pub fn synthesize(&self, c: &SubbandCoefficients) -> Result<Vec<f64>> {
        if c.channels.len() != self.members.len() {
            return Err(Error::DimensionMismatch {
                expected: self.members.len(),
                got: c.channels.len(),
            });
        }
        let mut signals: Vec<Vec<f64>> = Vec::with_capacity(self.members.len());
        for (chan, nodes) in c.channels.iter().zip(&self.members) {
            if chan.len() != nodes.len() {
                return Err(Error::DimensionMismatch {
                    expected: nodes.len(),
                    got: chan.len(),
                });
            }
            let mut up = vec![0.0; self.n];
            for (&v, &x) in nodes.iter().zip(chan) {
                up[v] = x;
            }
            signals.push(up);
        }
        for op in self.levels.iter().rev() {
            signals = signals
                .chunks(2)
                .map(|pair| {
                    let low = synth_branch(&self.kernels.g0, op, &pair[0]);
                    let high = synth_branch(&self.kernels.g1, op, &pair[1]);
                    low.iter().zip(&high).map(|(a, b)| a + b).collect()
                })
                .collect();
        }
        Ok(signals.pop().expect("one signal remains"))
    }
}

fn synth_branch(kernel: &Poly, op: &LevelOperator, x: &[f64]) -> Vec<f64> {
    if x.iter().all(|&v| v == 0.0) {
        vec![0.0; x.len()]
    } else {
        op.filter(kernel, x)
    }
}

/// One Harary level: the symmetric normalized operator `T_t` and the
/// square-root degrees that conjugate it into random-walk form.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelOperator {
    pub matrix: SymMatrix,
    /// `√d` per node, 1 for nodes without level edges.
    pub sqrt_degree: Vec<f64>,
}

impl LevelOperator {
    /// `D^{-1/2} p(T) D^{1/2} x`.
    pub fn filter(&self, kernel: &Poly, x: &[f64]) -> Vec<f64> {
        let scaled: Vec<f64> = x.iter().zip(&self.sqrt_degree).map(|(v, s)| v * s).collect();
        let mut y = kernel.apply(&self.matrix, &scaled);
        y.iter_mut().zip(&self.sqrt_degree).for_each(|(v, s)| *v /= s);
        y
    }
}

fn level_operator(couplings: &SymMatrix, edges: &[(usize, usize)]) -> Result<LevelOperator> {
    let n = couplings.dim();
    let mut degree = vec![0.0; n];
    for &(i, j) in edges {
        let w = couplings.get(i, j).abs();
        degree[i] += w;
        degree[j] += w;
    }
    let inv: Vec<f64> = degree
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
        .collect();
    let trip = (0..n).map(|i| (i, i, 1.0)).chain(
        edges
            .iter()
            .map(|&(i, j)| (i, j, -couplings.get(i, j) * (inv[i] * inv[j]))),
    );
    Ok(LevelOperator {
        matrix: SymMatrix::from_upper_triplets(n, trip)?,
        sqrt_degree: degree.iter().map(|&d| if d > 0.0 { d.sqrt() } else { 1.0 }).collect(),
    })
}
