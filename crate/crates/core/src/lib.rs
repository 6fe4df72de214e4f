//! Robust subspace clustering via CUR decompositions.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense matrices, SVD, pseudoinverse and CUR factors.
//! * [`sampling`]: row/column distributions and the DEIM selector.
//! * [`similarity`]: shape interaction matrices, CUR trials and the
//!   robust aggregation driver [`rcur`].
//! * [`spectral`]: Laplacians, normalized spectral clustering and the
//!   cut/spectral-gap rank selection cost.
//! * [`datagen`]: synthetic union-of-subspaces data and incoherence.
//! * [`eval`]: clustering error under optimal label matching and summaries.
//! * [`ingest`]: CSV matrix, label and manifest file formats.

pub mod datagen;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod linalg;
pub mod rng;
pub mod sampling;
pub mod similarity;
pub mod spectral;

pub use datagen::{generate_union, incoherence, LabeledDataset, SyntheticConfig};
pub use error::{Error, Result};
pub use eval::{clustering_error, summarize, TrialStats};
pub use linalg::{
    cur_approximation, numerical_rank, pseudoinverse, svd_compact, CurFactors, DenseMatrix,
    SvdFactors,
};
pub use sampling::{
    build_distribution, deim_select, draw_indices, Axis, Distribution, SamplingMethod,
    SamplingSpec,
};
pub use similarity::{
    aggregate_and_threshold, rcur, shape_interaction, trial_similarity, ClusteringOutcome, Kappa,
    RcurConfig, SimilarityMatrix,
};
pub use spectral::{
    clustering_cost, cut_value, laplacian, spectral_clustering, CostReport, LabelVector,
    LaplacianKind, RankCost,
};
