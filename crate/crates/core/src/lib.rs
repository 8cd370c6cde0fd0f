//! Multi-view subspace clustering with joint featurewise weighting and
//! adaptive local-graph learning.
//!
//! Each view `X⁽ᵛ⁾` (features × samples) gets a self-representation `Z⁽ᵛ⁾`,
//! a learned row-stochastic local graph `A⁽ᵛ⁾`, a sparse error `E⁽ᵛ⁾` and a
//! simplex-constrained feature weighting `w⁽ᵛ⁾`. All views share one
//! spectral embedding `Q`. The coupled problem is solved by an augmented
//! Lagrangian scheme with alternating block updates ([`solver::solve`]).
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`data`] | datasets, CSV ingestion, normalization, synthetic generator |
//! | [`graph`] | Laplacians, weighted distances, affinities, similarity fusion |
//! | [`prox`] | simplex projection, soft-thresholding, spectral-norm prox |
//! | [`solver`] | the alternating-direction solver and its block updates |
//! | [`spectral`] | eigen-embeddings, k-means, NCut baseline |
//! | [`metrics`] | ACC, NMI, ARI, pairwise precision/recall/F-score |

pub mod data;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod prox;
pub mod solver;
pub mod spectral;

pub use data::{MultiViewDataset, Normalization, SynthSpec, ViewMatrix};
pub use error::{Error, Result};
pub use graph::{Affinity, LaplacianMatrix};
pub use metrics::MetricReport;
pub use solver::{
    Ablation, ClusteringResult, ConvergenceTrace, LabelSource, SolverConfig, SolverState,
    TraceRow,
};
pub use spectral::Embedding;

/// Dense column-major matrix used throughout.
pub type Matrix = nalgebra::DMatrix<f64>;
/// Dense vector used throughout.
pub type Vector = nalgebra::DVector<f64>;
