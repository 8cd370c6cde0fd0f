use super::state::{SolverState, ViewData, ViewState};
use super::SolverConfig;
use crate::error::Result;
use crate::graph;
use crate::prox::spectral_norm;
use crate::Matrix;

/// Model objective and constraint gaps at one iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveReport {
    pub objective: f64,
    /// Largest `|X − XZ − E|` entry over views.
    pub r_recon: f64,
    /// Largest `|Z − U|` entry over views.
    pub r_u: f64,
    /// Largest `|Z − A|` entry over views.
    pub r_a: f64,
}

impl ObjectiveReport {
    pub fn max_residual(&self) -> f64 {
        self.r_recon.max(self.r_u).max(self.r_a)
    }
}

/// Per-view objective terms, kept separate for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveTerms {
    pub local: f64,
    pub spectral: f64,
    pub sparse: f64,
    pub embedding: f64,
}

impl ObjectiveTerms {
    pub fn total(&self) -> f64 {
        self.local + self.spectral + self.sparse + self.embedding
    }
}

pub fn view_terms(
    data: &ViewData,
    view: &ViewState,
    q: &Matrix,
    config: &SolverConfig,
) -> Result<ObjectiveTerms> {
    let dist = graph::weighted_sq_distances(&data.x, &view.w)?;
    let local = dist.component_mul(&view.a).sum();
    let lap = graph::laplacian(&view.a)?.values;
    let embedding = 2.0 * config.lambda1 * (q.transpose() * lap * q).trace();
    let spectral = config.effective_lambda2() * spectral_norm(&view.u);
    let sparse = config.lambda3 * view.e.iter().map(|x| x.abs()).sum::<f64>();
    Ok(ObjectiveTerms {
        local,
        spectral,
        sparse,
        embedding,
    })
}

fn recon_gap(data: &ViewData, view: &ViewState) -> Matrix {
    &data.x - &data.x * &view.z - &view.e
}

pub fn evaluate_objective(
    data: &[ViewData],
    state: &SolverState,
    config: &SolverConfig,
) -> Result<ObjectiveReport> {
    let mut report = ObjectiveReport {
        objective: 0.0,
        r_recon: 0.0,
        r_u: 0.0,
        r_a: 0.0,
    };
    for (d, v) in data.iter().zip(&state.views) {
        report.objective += view_terms(d, v, &state.q, config)?.total();
        report.r_recon = report.r_recon.max(recon_gap(d, v).amax());
        report.r_u = report.r_u.max((&v.z - &v.u).amax());
        report.r_a = report.r_a.max((&v.z - &v.a).amax());
    }
    Ok(report)
}

/// Augmented Lagrangian at the current variables, multipliers and `μ`.
pub fn augmented_lagrangian(
    data: &[ViewData],
    state: &SolverState,
    config: &SolverConfig,
) -> Result<f64> {
    let mu = state.mu;
    let mut total = 0.0;
    for (d, v) in data.iter().zip(&state.views) {
        total += view_terms(d, v, &state.q, config)?.total();
        let r1 = recon_gap(d, v);
        let r2 = &v.z - &v.u;
        let r3 = &v.z - &v.a;
        total += v.lambda1.dot(&r1) + v.lambda2.dot(&r2) + v.lambda3.dot(&r3);
        total += 0.5 * mu * (r1.norm_squared() + r2.norm_squared() + r3.norm_squared());
    }
    Ok(total)
}
