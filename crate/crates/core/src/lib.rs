//! Lossy compression of weighted adjacency matrices.
//!
//! The binary topology of a graph is coded losslessly. The edge weights are
//! treated as a signal on the line graph, transformed with a critically
//! sampled biorthogonal graph filter bank, sparsified, quantized and entropy
//! coded. Direct matrix baselines and an evaluation harness (generators,
//! reconstruction/diffusion/clustering metrics, rate–distortion sweeps) sit
//! alongside the codec.

pub mod baselines;
pub mod codec;
pub mod error;
pub mod eval;
pub mod filterbank;
pub mod graph;
pub mod line_graph;
pub mod linalg;

pub use error::{DecodeError, Error, Result};
pub use graph::UGraph;
pub use line_graph::OperatorMode;
