//! Comparison methods that code the weighted adjacency matrix directly.
//!
//! Lossy baselines share the quantizer and entropy coder of the codec. Their
//! byte counts come from an actual serialization: a 24-byte header (tag,
//! `N`, step, operating point) followed by length-prefixed entropy-coded
//! sections. Reconstructions are decoded from those bytes and symmetrized as
//! `(M + Mᵀ)/2`. None of the baselines transmit the topology separately.

mod dct;
mod gfb;
mod lra;

pub use dct::{dct_matrix, direct_dct, DctBaseline};
pub use gfb::{direct_gfb, GfbBaseline};
pub use lra::{direct_lra, rank_for_budget, LraBaseline};

use nalgebra::DMatrix;

use crate::codec::{dequantize, entropy_decode, entropy_encode, quantize};
use crate::error::{Error, Result};
use crate::graph::UGraph;

pub const BASELINE_HEADER_BYTES: usize = 4 + 4 + 8 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineMethod {
    DirectGfb,
    DirectLra,
    DirectDct,
    Binary,
}

impl BaselineMethod {
    pub fn name(self) -> &'static str {
        match self {
            BaselineMethod::DirectGfb => "direct-gfb",
            BaselineMethod::DirectLra => "direct-lra",
            BaselineMethod::DirectDct => "direct-dct",
            BaselineMethod::Binary => "binary",
        }
    }

    fn tag(self) -> &'static [u8; 4] {
        match self {
            BaselineMethod::DirectGfb => b"BGFB",
            BaselineMethod::DirectLra => b"BLRA",
            BaselineMethod::DirectDct => b"BDCT",
            BaselineMethod::Binary => b"BBIN",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub method: BaselineMethod,
    /// Symmetric reconstruction of W.
    pub reconstructed: DMatrix<f64>,
    pub bytes: usize,
    /// ρ for transform baselines, the rank r for LRA, 1 for binary.
    pub operating_point: f64,
}

/// Serialized baseline stream: header plus coded sections.
struct Payload {
    bytes: Vec<u8>,
}

impl Payload {
    fn new(method: BaselineMethod, n: usize, step: f64, point: f64) -> Self {
        let mut bytes = Vec::with_capacity(BASELINE_HEADER_BYTES);
        bytes.extend(method.tag());
        bytes.extend((n as u32).to_le_bytes());
        bytes.extend(step.to_le_bytes());
        bytes.extend(point.to_le_bytes());
        Self { bytes }
    }

    /// Quantizes `values`, appends the coded section and returns the values
    /// as the decoder recovers them from the appended bytes.
    fn push_quantized(&mut self, values: &[f64], step: f64) -> Result<Vec<f64>> {
        let section = entropy_encode(&quantize(values, step)?);
        self.bytes.extend((section.len() as u32).to_le_bytes());
        self.bytes.extend(&section);
        Ok(dequantize(&entropy_decode(&section, values.len())?, step))
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

fn check_square(w: &DMatrix<f64>) -> Result<usize> {
    if w.nrows() != w.ncols() {
        return Err(Error::DimensionMismatch {
            expected: w.nrows(),
            got: w.ncols(),
        });
    }
    for i in 0..w.nrows() {
        for j in 0..i {
            if w[(i, j)] != w[(j, i)] {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(w.nrows())
}

/// Unit weights on the original topology; bytes are the topology coder's.
pub fn binary_baseline(g: &UGraph) -> BaselineResult {
    let topology = crate::codec::encode_topology(g.node_count(), g.edges());
    BaselineResult {
        method: BaselineMethod::Binary,
        reconstructed: g.binary_adjacency().to_dense(),
        bytes: topology.len(),
        operating_point: 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_matches_topology_coder() {
        let g = UGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (0, 3, 1.0)]).unwrap();
        let r = binary_baseline(&g);
        assert_eq!(r.bytes, crate::codec::encode_topology(4, g.edges()).len());
        assert_eq!(r.reconstructed, g.weighted_adjacency().to_dense());
    }

    #[test]
    fn rejects_asymmetric_input() {
        let mut w = DMatrix::zeros(3, 3);
        w[(0, 1)] = 1.0;
        assert!(matches!(check_square(&w), Err(Error::NotSymmetric { .. })));
        assert!(check_square(&DMatrix::zeros(2, 3)).is_err());
    }
}
