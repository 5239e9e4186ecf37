//! Biorthogonal graph filter banks on (possibly non-bipartite) graphs.

mod design;
mod harary;
mod poly;
mod transform;

pub use design::{design_biorthogonal, half_band, pr_residual, BiorFilterBank, MAX_ORDER};
pub use harary::{harary_decompose, BipartiteDecomposition};
pub use poly::Poly;
pub use transform::{GraphFilterBank, LevelOperator, SubbandCoefficients};

use crate::error::Result;
use crate::line_graph::EdgeOperator;

/// One-shot analysis of `f` on an edge-domain operator. Prefer
/// [`GraphFilterBank`] when transforming several signals on the same graph.
pub fn analyze(
    op: &EdgeOperator,
    dec: &BipartiteDecomposition,
    fb: &BiorFilterBank,
    f: &[f64],
) -> Result<SubbandCoefficients> {
    GraphFilterBank::new(&op.couplings(), dec, fb)?.analyze(f)
}

pub fn synthesize(
    op: &EdgeOperator,
    dec: &BipartiteDecomposition,
    fb: &BiorFilterBank,
    c: &SubbandCoefficients,
) -> Result<Vec<f64>> {
    GraphFilterBank::new(&op.couplings(), dec, fb)?.synthesize(c)
}
