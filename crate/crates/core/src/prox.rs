//! Projections and proximal maps used by the solver's block updates.

use crate::error::{invalid, Result};
use crate::Matrix;

/// Euclidean projection onto the probability simplex with one coordinate
/// pinned to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexProjectionResult {
    pub point: Vec<f64>,
    /// Threshold `η` with `point_j = max(v_j + η, 0)` off the excluded index.
    pub multiplier: f64,
}

/// Threshold `η` such that `Σ max(u_j + η, 0) = radius` over `values`.
///
/// Sorts descending and keeps the largest prefix whose threshold still
/// leaves every member positive.
fn simplex_threshold(values: impl Iterator<Item = f64>, radius: f64) -> f64 {
    let mut sorted: Vec<f64> = values.collect();
    debug_assert!(!sorted.is_empty());
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut eta = radius - sorted[0];
    for (idx, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (radius - cumsum) / (idx + 1) as f64;
        if u + candidate > 0.0 {
            eta = candidate;
        } else {
            break;
        }
    }
    eta
}

/// Solves `min ‖a − v‖²` s.t. `a ≥ 0`, `Σ a = 1`, `a[excluded] = 0`.
pub fn project_simplex_excluding(v: &[f64], excluded: usize) -> Result<SimplexProjectionResult> {
    let n = v.len();
    if n < 2 {
        return Err(invalid("simplex projection with an excluded index needs n >= 2"));
    }
    if excluded >= n {
        return Err(invalid(format!("excluded index {excluded} out of range for length {n}")));
    }
    let eta = simplex_threshold(
        v.iter().enumerate().filter(|(j, _)| *j != excluded).map(|(_, x)| *x),
        1.0,
    );
    let point = v
        .iter()
        .enumerate()
        .map(|(j, &x)| if j == excluded { 0.0 } else { (x + eta).max(0.0) })
        .collect();
    Ok(SimplexProjectionResult {
        point,
        multiplier: eta,
    })
}

/// Projection of a nonnegative vector onto the ℓ1 ball of the given radius.
fn project_l1_ball_nonneg(values: &[f64], radius: f64) -> Vec<f64> {
    let total: f64 = values.iter().sum();
    if total <= radius {
        return values.to_vec();
    }
    if radius == 0.0 {
        return vec![0.0; values.len()];
    }
    let eta = simplex_threshold(values.iter().copied(), radius);
    values.iter().map(|&x| (x + eta).max(0.0)).collect()
}

/// Elementwise shrinkage `sign(m)·max(|m| − τ, 0)`.
pub fn soft_threshold(m: &Matrix, tau: f64) -> Result<Matrix> {
    if !(tau >= 0.0) {
        return Err(invalid(format!("shrinkage threshold must be nonnegative, got {tau}")));
    }
    Ok(m.map(|x| x.signum() * (x.abs() - tau).max(0.0)))
}

fn svd_map(m: &Matrix, f: impl FnOnce(&[f64]) -> Vec<f64>) -> Result<Matrix> {
    let svd = m.clone().svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(crate::Error::Numerical("SVD did not return singular vectors".into()));
    };
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mapped = f(&sigma);
    let mut us = u;
    for (k, s) in mapped.iter().enumerate() {
        us.column_mut(k).scale_mut(*s);
    }
    Ok(us * v_t)
}

/// `argmin_U t‖U‖₂ + ½‖U − M‖²_F`.
///
/// By Moreau decomposition this is `M` minus its projection onto the
/// nuclear-norm ball of radius `t`, which amounts to clipping the singular
/// values at the level `θ` where the clipped-off mass equals `t`.
pub fn prox_spectral_norm(m: &Matrix, t: f64) -> Result<Matrix> {
    if !(t >= 0.0) {
        return Err(invalid(format!("prox weight must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(m.clone());
    }
    svd_map(m, |sigma| {
        let p = project_l1_ball_nonneg(sigma, t);
        sigma.iter().zip(&p).map(|(s, q)| (s - q).max(0.0)).collect()
    })
}

/// Projection onto `{X : ‖X‖_* ≤ t}`.
pub fn project_nuclear_ball(m: &Matrix, t: f64) -> Result<Matrix> {
    if !(t >= 0.0) {
        return Err(invalid(format!("ball radius must be nonnegative, got {t}")));
    }
    svd_map(m, |sigma| project_l1_ball_nonneg(sigma, t))
}

/// Largest singular value.
pub fn spectral_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}
