//! Spectral embeddings, k-means labelling and the concatenated-view NCut
//! baseline.

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::MultiViewDataset;
use crate::error::{invalid, Error, Result};
use crate::graph;
use crate::Matrix;

/// `n × c` eigenvector embedding; rows are samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub values: Matrix,
    /// Eigenvalues belonging to the columns, ascending.
    pub eigenvalues: Vec<f64>,
}

/// Flips `col` so its largest-magnitude entry (first one on ties) is positive.
fn fix_sign(mut col: nalgebra::DVectorViewMut<'_, f64>) {
    let mut best = 0;
    for i in 1..col.len() {
        if col[i].abs() > col[best].abs() {
            best = i;
        }
    }
    if col[best] < 0.0 {
        col.neg_mut();
    }
}

/// Eigenvectors of a symmetric matrix for its `c` smallest eigenvalues,
/// ascending, with a deterministic sign per column.
pub fn smallest_eigvecs(l: &Matrix, c: usize) -> Result<Embedding> {
    let n = l.nrows();
    if !l.is_square() {
        return Err(crate::error::dim_mismatch("eigen-embedding needs a square matrix"));
    }
    if c == 0 || c > n {
        return Err(invalid(format!("cannot take {c} eigenvectors of a {n}x{n} matrix")));
    }
    let sym = graph::symmetrize(l);
    let eig = SymmetricEigen::try_new(sym, 1e-15, 0)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let mut values = Matrix::zeros(n, c);
    for (k, &idx) in order[..c].iter().enumerate() {
        values.column_mut(k).copy_from(&eig.eigenvectors.column(idx));
        fix_sign(values.column_mut(k));
    }
    Ok(Embedding {
        values,
        eigenvalues: order[..c].iter().map(|&i| eig.eigenvalues[i]).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansOptions {
    pub n_init: usize,
    pub max_iter: usize,
    /// Stop once the relative inertia decrease falls to this level.
    pub tol: f64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            n_init: 10,
            max_iter: 300,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub labels: Vec<usize>,
    /// `k × dim`, one centroid per row.
    pub centroids: Matrix,
    pub inertia: f64,
    /// Inertia after each assignment step of the winning restart.
    pub inertia_history: Vec<f64>,
}

fn row_sq_dist(points: &Matrix, i: usize, centroids: &Matrix, k: usize) -> f64 {
    let mut acc = 0.0;
    for d in 0..points.ncols() {
        let diff = points[(i, d)] - centroids[(k, d)];
        acc += diff * diff;
    }
    acc
}

/// k-means++ style seeding: each new centre is drawn with probability
/// proportional to the squared distance to the nearest chosen centre.
fn seed_centroids(points: &Matrix, k: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let (n, dim) = points.shape();
    let mut centroids = Matrix::zeros(k, dim);
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    centroids.row_mut(0).copy_from(&points.row(first));
    let mut nearest: Vec<f64> = (0..n).map(|i| row_sq_dist(points, i, &centroids, 0)).collect();
    for c in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random_range(0.0..total);
            let mut pick = None;
            for (i, &d) in nearest.iter().enumerate() {
                if d > 0.0 {
                    if target < d {
                        pick = Some(i);
                        break;
                    }
                    target -= d;
                }
            }
            // Round-off can exhaust the loop; fall back to the last positive entry.
            pick.unwrap_or_else(|| nearest.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen[pick] = true;
        centroids.row_mut(c).copy_from(&points.row(pick));
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(row_sq_dist(points, i, &centroids, c));
        }
    }
    centroids
}

fn lloyd(points: &Matrix, mut centroids: Matrix, opts: &KMeansOptions) -> KMeansFit {
    let (n, dim) = points.shape();
    let k = centroids.nrows();
    let mut labels = vec![0usize; n];
    let mut cost = vec![0.0; n];
    let mut history = Vec::new();
    for _ in 0..opts.max_iter.max(1) {
        for i in 0..n {
            let mut best = 0;
            let mut best_d = row_sq_dist(points, i, &centroids, 0);
            for c in 1..k {
                let d = row_sq_dist(points, i, &centroids, c);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            labels[i] = best;
            cost[i] = best_d;
        }
        // Empty clusters take over the point farthest from its centre.
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&i| counts[labels[i]] > 1)
                .max_by(|&a, &b| cost[a].total_cmp(&cost[b]).then(b.cmp(&a)));
            if let Some(far) = far {
                counts[labels[far]] -= 1;
                counts[c] = 1;
                labels[far] = c;
                cost[far] = 0.0;
                centroids.row_mut(c).copy_from(&points.row(far));
            }
        }
        let inertia: f64 = cost.iter().sum();
        let prev = history.last().copied();
        history.push(inertia);

        let mut next = Matrix::zeros(k, dim);
        for i in 0..n {
            let mut row = next.row_mut(labels[i]);
            row += points.row(i);
        }
        for c in 0..k {
            next.row_mut(c).scale_mut(1.0 / counts[c].max(1) as f64);
        }
        centroids = next;

        if let Some(prev) = prev {
            if prev - inertia <= opts.tol * prev.max(f64::MIN_POSITIVE) {
                break;
            }
        }
    }
    // Final assignment against the last centroids, kept only if it helps.
    let inertia = *history.last().unwrap();
    let mut final_labels = labels.clone();
    let mut final_inertia = 0.0;
    for i in 0..n {
        let mut best = labels[i];
        let mut best_d = row_sq_dist(points, i, &centroids, best);
        for c in 0..k {
            let d = row_sq_dist(points, i, &centroids, c);
            if d < best_d {
                best = c;
                best_d = d;
            }
        }
        final_labels[i] = best;
        final_inertia += best_d;
    }
    let covered = {
        let mut seen = vec![false; k];
        final_labels.iter().for_each(|&l| seen[l] = true);
        seen.iter().all(|&s| s)
    };
    if covered && final_inertia < inertia {
        history.push(final_inertia);
        labels = final_labels;
    }
    KMeansFit {
        labels,
        centroids,
        inertia: *history.last().unwrap(),
        inertia_history: history,
    }
}

/// Lloyd's algorithm with `opts.n_init` seeded restarts; the restart with
/// the lowest inertia wins (lowest restart index on ties). Restart `r` uses
/// ChaCha stream `r` of `seed`, so the result does not depend on how the
/// restarts are scheduled.
pub fn kmeans_fit(points: &Matrix, k: usize, seed: u64, opts: &KMeansOptions) -> Result<KMeansFit> {
    let n = points.nrows();
    if k == 0 || k > n {
        return Err(invalid(format!("k-means with k={k} on {n} points")));
    }
    if points.iter().any(|x| !x.is_finite()) {
        return Err(invalid("k-means input has non-finite values"));
    }
    let fits: Vec<KMeansFit> = (0..opts.n_init.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            lloyd(points, seed_centroids(points, k, &mut rng), opts)
        })
        .collect();
    let best = fits
        .into_iter()
        .reduce(|best, fit| if fit.inertia < best.inertia { fit } else { best })
        .expect("at least one restart");
    Ok(best)
}

/// Cluster labels of the rows of `points`.
pub fn kmeans(points: &Matrix, k: usize, seed: u64) -> Result<Vec<usize>> {
    Ok(kmeans_fit(points, k, seed, &KMeansOptions::default())?.labels)
}

/// Graph cut used for spectral labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutKind {
    /// Symmetric normalized Laplacian with unit-length embedding rows.
    #[default]
    Normalized,
    /// Unnormalized Laplacian, raw embedding rows.
    Ratio,
}

/// Spectral clustering of an affinity matrix into `c` groups.
pub fn spectral_cluster(affinity: &Matrix, c: usize, seed: u64, cut: CutKind) -> Result<Vec<usize>> {
    let lap = match cut {
        CutKind::Normalized => graph::normalized_laplacian(affinity)?,
        CutKind::Ratio => graph::laplacian(affinity)?,
    };
    let mut emb = smallest_eigvecs(&lap.values, c)?.values;
    if cut == CutKind::Normalized {
        for mut row in emb.row_iter_mut() {
            let norm = row.norm();
            if norm > 0.0 {
                row /= norm;
            }
        }
    }
    kmeans(&emb, c, seed)
}

/// Kernel width of the baseline's Gaussian affinity.
pub const BASELINE_SIGMA: f64 = 1.0;

/// Views concatenated feature-wise, Gaussian affinity with unit width, then
/// normalized-cut spectral clustering.
pub fn ncut_baseline(dataset: &MultiViewDataset, c: usize, seed: u64) -> Result<Vec<usize>> {
    ncut_baseline_with(dataset, c, seed, CutKind::Normalized)
}

pub fn ncut_baseline_with(
    dataset: &MultiViewDataset,
    c: usize,
    seed: u64,
    cut: CutKind,
) -> Result<Vec<usize>> {
    let n = dataset.n_samples();
    if c == 0 || c > n {
        return Err(invalid(format!("cannot form {c} clusters from {n} samples")));
    }
    let x = dataset.concatenated();
    let s = graph::gaussian_affinity(&x, BASELINE_SIGMA)?;
    spectral_cluster(&s.values, c, seed, cut)
}
