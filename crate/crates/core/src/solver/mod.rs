//! Augmented-Lagrangian alternating-direction solver.
//!
//! The model couples, for every view `v`,
//!
//! ```text
//!   Σ_ij ‖W(xᵢ − xⱼ)‖² a_ij + λ₂‖U‖₂ + λ₃‖E‖₁ + 2λ₁ Tr(Qᵀ L_A Q)
//!   s.t. X = XZ + E,  Z = U,  Z = A,
//!        A ≥ 0, A·1 = 1, diag(A) = 0,  QᵀQ = I,  w ≥ 0, w·1 = 1
//! ```
//!
//! with one embedding `Q` shared by all views. Each outer iteration sweeps
//! the views (Z, A, U, E, w, multipliers; views are independent and may run
//! in parallel), then refreshes `Q` and grows the penalty `μ`. The loop
//! stops when every constraint gap drops below `tol` or after `max_iter`
//! sweeps.

mod config;
mod objective;
mod state;
mod trace;
pub mod updates;

use crate::data::{self, MultiViewDataset};
use crate::error::Result;
use crate::graph::{self, Affinity};
use crate::spectral::{self, CutKind};
use crate::Matrix;

pub use config::{Ablation, LabelSource, SolverConfig};
pub use objective::{
    augmented_lagrangian, evaluate_objective, view_terms, ObjectiveReport, ObjectiveTerms,
};
pub use state::{initialize, SolverState, ViewData, ViewState};
pub use trace::{ConvergenceTrace, TraceRow, TRACE_HEADER};

#[derive(Debug, Clone)]
pub struct ClusteringResult {
    pub labels: Vec<usize>,
    /// Final shared embedding, `n × c`.
    pub q: Matrix,
    /// Fused similarity of the final local graphs.
    pub fused_similarity: Affinity,
    /// Learned feature weights, one vector per view.
    pub weights: Vec<Vec<f64>>,
    pub trace: ConvergenceTrace,
    pub converged: bool,
    pub iterations: usize,
    pub state: SolverState,
}

/// Final labels from a solver state.
pub fn assign_labels(state: &SolverState, config: &SolverConfig) -> Result<Vec<usize>> {
    match config.labels_from {
        LabelSource::Embedding => spectral::kmeans(&state.q, config.n_clusters, config.seed),
        LabelSource::Graph => {
            let fused = fuse_graphs(state)?;
            spectral::spectral_cluster(
                &fused.values,
                config.n_clusters,
                config.seed,
                CutKind::Normalized,
            )
        }
    }
}

fn fuse_graphs(state: &SolverState) -> Result<Affinity> {
    let graphs: Vec<Matrix> = state.views.iter().map(|v| v.a.clone()).collect();
    graph::fuse_similarity(&graphs)
}

/// Normalizes the views per `config.normalize`, runs the solver to
/// convergence (or `max_iter`) and labels the samples.
pub fn solve(dataset: &MultiViewDataset, config: &SolverConfig) -> Result<ClusteringResult> {
    solve_with_observer(dataset, config, |_, _| {})
}

/// As [`solve`], calling `observer` after every outer iteration.
pub fn solve_with_observer(
    dataset: &MultiViewDataset,
    config: &SolverConfig,
    mut observer: impl FnMut(&SolverState, &TraceRow),
) -> Result<ClusteringResult> {
    config.validate()?;
    let dataset = &data::normalize(dataset, config.normalize);
    let data = ViewData::from_dataset(dataset)?;
    let mut state = initialize(dataset, &data, config)?;
    let mut trace = ConvergenceTrace::default();
    let mut converged = false;

    for iteration in 1..=config.max_iter {
        let mu = state.mu;
        updates::iterate(&data, &mut state, config)?;
        let report = evaluate_objective(&data, &state, config)?;
        let row = TraceRow {
            iteration,
            objective: report.objective,
            r_recon: report.r_recon,
            r_u: report.r_u,
            r_a: report.r_a,
            mu,
        };
        trace.rows.push(row);
        observer(&state, &row);
        if !report.objective.is_finite() || !report.max_residual().is_finite() {
            return Err(crate::Error::Numerical(format!(
                "non-finite objective or residual at iteration {iteration}"
            )));
        }
        if report.max_residual() < config.tol {
            converged = true;
            break;
        }
    }

    let labels = assign_labels(&state, config)?;
    Ok(ClusteringResult {
        labels,
        q: state.q.clone(),
        fused_similarity: fuse_graphs(&state)?,
        weights: state.views.iter().map(|v| v.w.clone()).collect(),
        iterations: trace.len(),
        trace,
        converged,
        state,
    })
}
