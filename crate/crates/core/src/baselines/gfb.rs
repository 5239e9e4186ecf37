use nalgebra::DMatrix;

use super::{check_square, symmetrize, BaselineMethod, BaselineResult, Payload};
use crate::codec::nla_threshold;
use crate::error::{Error, Result};
use crate::filterbank::{design_biorthogonal, harary_decompose, GraphFilterBank, SubbandCoefficients};
use crate::graph::UGraph;

/// Columns of W transformed as node signals on the original graph.
#[derive(Debug, Clone)]
pub struct GfbBaseline {
    bank: GraphFilterBank,
    lengths: Vec<usize>,
    /// Per-column flat coefficients, concatenated column by column.
    coefficients: Vec<f64>,
}

impl GfbBaseline {
    /// `topology` supplies the graph on which columns are analyzed; its
    /// weights are ignored.
    pub fn new(w: &DMatrix<f64>, topology: &UGraph, filter_order: usize, m_max: usize) -> Result<Self> {
        let n = check_square(w)?;
        if topology.node_count() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: topology.node_count(),
            });
        }
        let adjacency = topology.binary_adjacency();
        let dec = harary_decompose(&adjacency, m_max);
        let bank = GraphFilterBank::new(&adjacency, &dec, &design_biorthogonal(filter_order)?)?;
        let lengths = bank.channel_members().iter().map(Vec::len).collect();
        let mut coefficients = Vec::with_capacity(n * n);
        for j in 0..n {
            let column: Vec<f64> = w.column(j).iter().copied().collect();
            coefficients.extend(bank.analyze(&column)?.flatten());
        }
        Ok(Self {
            bank,
            lengths,
            coefficients,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn encode(&self, rho: f64, step: f64) -> Result<BaselineResult> {
        let n = self.bank.len();
        let (sparse, _) = nla_threshold(&self.coefficients, rho)?;
        let mut payload = Payload::new(BaselineMethod::DirectGfb, n, step, rho);
        let decoded = payload.push_quantized(&sparse, step)?;
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            let c = SubbandCoefficients::from_flat(&decoded[j * n..(j + 1) * n], &self.lengths)?;
            if c.channels.iter().all(|ch| ch.iter().all(|&v| v == 0.0)) {
                continue;
            }
            m.set_column(j, &nalgebra::DVector::from_vec(self.bank.synthesize(&c)?));
        }
        Ok(BaselineResult {
            method: BaselineMethod::DirectGfb,
            reconstructed: symmetrize(m),
            bytes: payload.bytes.len(),
            operating_point: rho,
        })
    }
}

pub fn direct_gfb(
    w: &DMatrix<f64>,
    topology: &UGraph,
    filter_order: usize,
    m_max: usize,
    rho: f64,
    step: f64,
) -> Result<BaselineResult> {
    GfbBaseline::new(w, topology, filter_order, m_max)?.encode(rho, step)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critically_sampled_and_invertible() {
        let g = UGraph::new(
            6,
            [(0, 1, 0.5), (1, 2, 1.5), (2, 3, 0.8), (3, 4, 1.1), (4, 5, 0.3), (0, 5, 1.9), (1, 4, 0.7)],
        )
        .unwrap();
        let w = g.weighted_adjacency().to_dense();
        let b = GfbBaseline::new(&w, &g, 8, 3).unwrap();
        assert_eq!(b.coefficients().len(), 36);
        let r = b.encode(1.0, 1e-8).unwrap();
        assert!((&r.reconstructed - &w).norm() / w.norm() < 1e-6);
    }
}
