//! Closed-form block updates of the alternating-direction scheme. Each one
//! minimizes the augmented Lagrangian over its own block with everything
//! else held fixed.

use nalgebra::Cholesky;

use super::state::{SolverState, ViewData, ViewState};
use super::SolverConfig;
use crate::error::{Error, Result};
use crate::graph;
use crate::prox;
use crate::spectral;
use crate::Matrix;

/// Floor applied to the per-feature smoothness `y_kk` before inversion.
pub const WEIGHT_FLOOR: f64 = 1e-12;

/// Cholesky factor of `XᵀX + 2I`.
pub(crate) fn z_factor(gram: &Matrix) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    let n = gram.nrows();
    Cholesky::new(gram + Matrix::identity(n, n) * 2.0)
        .ok_or_else(|| Error::Numerical("XᵀX + 2I is not positive definite".into()))
}

/// Right-hand side `XᵀV₁ + V₂ + V₃` of the Z-step normal equations.
pub fn z_rhs(data: &ViewData, view: &ViewState, mu: f64) -> Matrix {
    let v1 = &data.x - &view.e + &view.lambda1 / mu;
    let v2 = &view.u - &view.lambda2 / mu;
    let v3 = &view.a - &view.lambda3 / mu;
    data.x.transpose() * v1 + v2 + v3
}

/// `Z = (XᵀX + 2I)⁻¹ (XᵀV₁ + V₂ + V₃)` via the cached factorization.
pub fn update_z(data: &ViewData, view: &ViewState, mu: f64) -> Matrix {
    data.factor.solve(&z_rhs(data, view, mu))
}

/// Pairwise squared distances between rows of `q`.
pub fn embedding_sq_distances(q: &Matrix) -> Matrix {
    graph::sq_distances(&q.transpose())
}

/// Row-wise simplex projection of `H − (D_w + λ₁ D_Q)/μ` with the diagonal
/// excluded, where `H = Z + Λ₃/μ`.
pub fn update_a(
    data: &ViewData,
    view: &ViewState,
    q: &Matrix,
    mu: f64,
    lambda1: f64,
) -> Result<Matrix> {
    if !(mu > 0.0) {
        return Err(Error::Numerical(format!("penalty must be positive, got {mu}")));
    }
    let n = data.n();
    let dist = graph::weighted_sq_distances(&data.x, &view.w)?;
    let qdist = embedding_sq_distances(q);
    let mut a = Matrix::zeros(n, n);
    let mut row = vec![0.0; n];
    for i in 0..n {
        for (j, r) in row.iter_mut().enumerate() {
            let h = view.z[(i, j)] + view.lambda3[(i, j)] / mu;
            *r = h - (dist[(i, j)] + lambda1 * qdist[(i, j)]) / mu;
        }
        let proj = prox::project_simplex_excluding(&row, i)?;
        for (j, v) in proj.point.into_iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    Ok(a)
}

/// `Q` = eigenvectors of `Σ_v L_{A⁽ᵛ⁾}` for the `c` smallest eigenvalues.
pub fn update_q(views: &[ViewState], c: usize) -> Result<Matrix> {
    let n = views[0].a.nrows();
    let mut m = Matrix::zeros(n, n);
    for v in views {
        m += graph::laplacian(&v.a)?.values;
    }
    Ok(spectral::smallest_eigvecs(&m, c)?.values)
}

/// `U = prox_{(λ₂/μ)‖·‖₂}(Z + Λ₂/μ)`.
pub fn update_u(view: &ViewState, mu: f64, lambda2: f64) -> Result<Matrix> {
    prox::prox_spectral_norm(&(&view.z + &view.lambda2 / mu), lambda2 / mu)
}

/// `E = Ω_{λ₃/μ}(X − XZ + Λ₁/μ)`.
pub fn update_e(data: &ViewData, view: &ViewState, mu: f64, lambda3: f64) -> Result<Matrix> {
    let m = &data.x - &data.x * &view.z + &view.lambda1 / mu;
    prox::soft_threshold(&m, lambda3 / mu)
}

/// Diagonal of `X L_A Xᵀ`, floored at [`WEIGHT_FLOOR`].
pub fn feature_smoothness(data: &ViewData, a: &Matrix) -> Result<Vec<f64>> {
    let l = graph::laplacian(a)?.values;
    let xl = &data.x * l;
    Ok((0..data.x.nrows())
        .map(|k| xl.row(k).dot(&data.x.row(k)).max(WEIGHT_FLOOR))
        .collect())
}

/// Minimizer of `Σ_k w_k² y_kk` over the simplex: `w_k ∝ 1/y_kk`.
pub fn update_w(data: &ViewData, view: &ViewState) -> Result<Vec<f64>> {
    let y = feature_smoothness(data, &view.a)?;
    Ok(weights_from_smoothness(&y))
}

pub fn weights_from_smoothness(y: &[f64]) -> Vec<f64> {
    let inv: Vec<f64> = y.iter().map(|v| 1.0 / v).collect();
    let total: f64 = inv.iter().sum();
    inv.into_iter().map(|v| v / total).collect()
}

/// Dual ascent on the three constraint gaps, in place.
pub fn update_multipliers(data: &ViewData, view: &mut ViewState, mu: f64) {
    let r1 = &data.x - &data.x * &view.z - &view.e;
    view.lambda1 += r1 * mu;
    view.lambda2 += (&view.z - &view.u) * mu;
    view.lambda3 += (&view.z - &view.a) * mu;
}

/// `μ ← min(ρμ, μ_max)`.
pub fn step_mu(mu: f64, config: &SolverConfig) -> f64 {
    (config.rho * mu).min(config.mu_max)
}

/// One full pass over a single view in the fixed order Z, A, U, E, w,
/// multipliers.
pub fn view_pass(
    data: &ViewData,
    view: &mut ViewState,
    q: &Matrix,
    mu: f64,
    config: &SolverConfig,
) -> Result<()> {
    view.z = update_z(data, view, mu);
    view.a = update_a(data, view, q, mu, config.lambda1)?;
    view.u = update_u(view, mu, config.effective_lambda2())?;
    view.e = update_e(data, view, mu, config.lambda3)?;
    if config.ablation.learns_weights() {
        view.w = update_w(data, view)?;
    }
    update_multipliers(data, view, mu);
    Ok(())
}

/// One outer iteration: every view, then `Q`, then `μ`.
pub fn iterate(
    data: &[ViewData],
    state: &mut SolverState,
    config: &SolverConfig,
) -> Result<()> {
    let mu = state.mu;
    let q = &state.q;
    if config.parallel_views {
        use rayon::prelude::*;
        data.par_iter()
            .zip(state.views.par_iter_mut())
            .try_for_each(|(d, v)| view_pass(d, v, q, mu, config))?;
    } else {
        for (d, v) in data.iter().zip(state.views.iter_mut()) {
            view_pass(d, v, q, mu, config)?;
        }
    }
    state.q = update_q(&state.views, config.n_clusters)?;
    state.mu = step_mu(mu, config);
    Ok(())
}
