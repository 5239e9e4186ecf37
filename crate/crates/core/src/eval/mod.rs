//! Synthetic graphs, evaluation metrics and rate–distortion sweeps.

mod clustering;
mod generators;
mod metrics;
mod sweep;

pub use clustering::{
    cluster_consistency, kmeans, max_weight_assignment, spectral_clustering, spectral_clustering_with, KMeansConfig,
    KMeansFit,
};
pub use generators::{block_labels, generate, truncated_normal, GenParams, GenSpec, GraphKind};
pub use metrics::{diffuse, diffusion_inputs, diffusion_snr, snr, Diffusion, DiffusionConfig, DIFFUSION_TAU};
pub use sweep::{rd_sweep, to_json, write_csv, MetricReport, Method, References, SweepConfig, SweepReport};
