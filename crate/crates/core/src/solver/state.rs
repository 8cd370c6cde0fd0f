use nalgebra::Cholesky;

use super::updates::{self, z_factor};
use super::SolverConfig;
use crate::data::MultiViewDataset;
use crate::error::{invalid, Result};
use crate::graph;
use crate::Matrix;

/// Immutable per-view data plus the Z-step factorization, computed once.
#[derive(Debug, Clone)]
pub struct ViewData {
    pub x: Matrix,
    pub(crate) factor: Cholesky<f64, nalgebra::Dyn>,
}

impl ViewData {
    pub fn new(x: Matrix) -> Result<Self> {
        let gram = x.transpose() * &x;
        let factor = z_factor(&gram)?;
        Ok(Self { x, factor })
    }

    pub fn from_dataset(dataset: &MultiViewDataset) -> Result<Vec<Self>> {
        dataset
            .views
            .iter()
            .map(|v| Self::new(v.values.clone()))
            .collect()
    }

    pub fn n(&self) -> usize {
        self.x.ncols()
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }
}

/// Primal and dual variables of one view.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewState {
    /// Self-representation, `n × n`.
    pub z: Matrix,
    /// Learned local graph: nonnegative, rows sum to one, zero diagonal.
    pub a: Matrix,
    /// Spectral-norm auxiliary copy of `Z`.
    pub u: Matrix,
    /// Sparse reconstruction error, `d × n`.
    pub e: Matrix,
    /// Multiplier of `X = XZ + E`.
    pub lambda1: Matrix,
    /// Multiplier of `Z = U`.
    pub lambda2: Matrix,
    /// Multiplier of `Z = A`.
    pub lambda3: Matrix,
    /// Feature weights on the simplex.
    pub w: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub views: Vec<ViewState>,
    /// Shared `n × c` embedding with orthonormal columns.
    pub q: Matrix,
    pub mu: f64,
}

/// Starting point: `Z = A = U` = kNN graph of each view, zero error and
/// multipliers, uniform weights, and `Q` from the summed kNN Laplacians.
pub fn initialize(
    dataset: &MultiViewDataset,
    data: &[ViewData],
    config: &SolverConfig,
) -> Result<SolverState> {
    config.validate()?;
    let n = dataset.n_samples();
    if config.k_init >= n {
        return Err(invalid(format!(
            "k_init must lie in [1, {}], got {}",
            n - 1,
            config.k_init
        )));
    }
    if config.n_clusters > n {
        return Err(invalid(format!(
            "{} clusters requested for {n} samples",
            config.n_clusters
        )));
    }
    let views = data
        .iter()
        .map(|d| {
            let knn = graph::knn_affinity(&d.x, config.k_init)?.values;
            let dim = d.dim();
            Ok(ViewState {
                z: knn.clone(),
                a: knn.clone(),
                u: knn,
                e: Matrix::zeros(dim, n),
                lambda1: Matrix::zeros(dim, n),
                lambda2: Matrix::zeros(n, n),
                lambda3: Matrix::zeros(n, n),
                w: vec![1.0 / dim as f64; dim],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let q = updates::update_q(&views, config.n_clusters)?;
    Ok(SolverState {
        views,
        q,
        mu: config.mu0,
    })
}
