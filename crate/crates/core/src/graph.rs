//! Graph-side primitives: affinities, Laplacians, feature-weighted pairwise
//! distances and multi-view similarity fusion.

use crate::error::{dim_mismatch, invalid, Result};
use crate::Matrix;

/// Nonnegative `n × n` similarity with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Affinity {
    pub values: Matrix,
}

impl Affinity {
    /// Wraps a matrix after checking square shape, finite nonnegative
    /// entries and a zero diagonal.
    pub fn new(values: Matrix) -> Result<Self> {
        if !values.is_square() {
            return Err(dim_mismatch(format!(
                "affinity must be square, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if values.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(invalid("affinity entries must be finite and nonnegative"));
        }
        if values.diagonal().iter().any(|x| *x != 0.0) {
            return Err(invalid("affinity diagonal must be zero"));
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }
}

/// Symmetric positive semidefinite graph Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    pub values: Matrix,
}

/// `(G + Gᵀ) / 2`.
pub fn symmetrize(g: &Matrix) -> Matrix {
    (g + g.transpose()) * 0.5
}

/// Unnormalized Laplacian `D − (G+Gᵀ)/2` with `D = diag(((G+Gᵀ)/2)·1)`.
pub fn laplacian(graph: &Matrix) -> Result<LaplacianMatrix> {
    if !graph.is_square() {
        return Err(dim_mismatch(format!(
            "Laplacian needs a square matrix, got {}x{}",
            graph.nrows(),
            graph.ncols()
        )));
    }
    let n = graph.nrows();
    let mut l = -symmetrize(graph);
    for i in 0..n {
        // Row sum of the off-diagonal part; the diagonal of G cancels out.
        let mut deg = 0.0;
        for j in 0..n {
            if j != i {
                deg -= l[(i, j)];
            }
        }
        l[(i, i)] = deg;
    }
    Ok(LaplacianMatrix { values: l })
}

/// Symmetric normalized Laplacian `I − D^{-1/2} S D^{-1/2}` of the
/// symmetrized graph. Isolated vertices get identity rows.
pub fn normalized_laplacian(graph: &Matrix) -> Result<LaplacianMatrix> {
    if !graph.is_square() {
        return Err(dim_mismatch("normalized Laplacian needs a square matrix"));
    }
    let s = symmetrize(graph);
    let n = s.nrows();
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|i| {
            let d: f64 = s.row(i).sum();
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut l = Matrix::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            l[(i, j)] -= inv_sqrt[i] * s[(i, j)] * inv_sqrt[j];
        }
    }
    Ok(LaplacianMatrix { values: l })
}

/// Pairwise `Σ_k w_k² (x_ki − x_kj)²`, i.e. squared distances after
/// scaling each feature by its weight.
pub fn weighted_sq_distances(x: &Matrix, w: &[f64]) -> Result<Matrix> {
    let (d, n) = x.shape();
    if w.len() != d {
        return Err(dim_mismatch(format!("{} weights for {d} features", w.len())));
    }
    if w.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(invalid("feature weights must be finite and nonnegative"));
    }
    let w2: Vec<f64> = w.iter().map(|v| v * v).collect();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        let xi = x.column(i);
        for j in i + 1..n {
            let xj = x.column(j);
            let mut acc = 0.0;
            for k in 0..d {
                let diff = xi[k] - xj[k];
                acc += w2[k] * diff * diff;
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc;
        }
    }
    Ok(out)
}

/// Unweighted squared Euclidean distances between columns.
pub fn sq_distances(x: &Matrix) -> Matrix {
    let ones = vec![1.0; x.nrows()];
    weighted_sq_distances(x, &ones).expect("unit weights always match")
}

/// Averages `(|Z| + |Zᵀ|)/2` over views and zeroes the diagonal.
pub fn fuse_similarity(zs: &[Matrix]) -> Result<Affinity> {
    let Some(first) = zs.first() else {
        return Err(invalid("fuse_similarity needs at least one matrix"));
    };
    let shape = first.shape();
    if shape.0 != shape.1 {
        return Err(dim_mismatch("similarity inputs must be square"));
    }
    let mut s = Matrix::zeros(shape.0, shape.1);
    for z in zs {
        if z.shape() != shape {
            return Err(dim_mismatch(format!(
                "similarity inputs differ in shape: {:?} vs {:?}",
                z.shape(),
                shape
            )));
        }
        let a = z.abs();
        s += (&a + a.transpose()) * 0.5;
    }
    s /= zs.len() as f64;
    s.fill_diagonal(0.0);
    Affinity::new(s)
}

/// Row-stochastic kNN graph: row `i` puts `1/k` on its `k` nearest other
/// samples. Distance ties go to the lower sample index.
pub fn knn_affinity(x: &Matrix, k: usize) -> Result<Affinity> {
    let n = x.ncols();
    if k == 0 || k >= n {
        return Err(invalid(format!("k must lie in [1, {}], got {k}", n.saturating_sub(1))));
    }
    let dist = sq_distances(x);
    let mut a = Matrix::zeros(n, n);
    let weight = 1.0 / k as f64;
    let mut order: Vec<usize> = Vec::with_capacity(n - 1);
    for i in 0..n {
        order.clear();
        order.extend((0..n).filter(|&j| j != i));
        order.sort_by(|&p, &q| dist[(i, p)].total_cmp(&dist[(i, q)]).then(p.cmp(&q)));
        for &j in &order[..k] {
            a[(i, j)] = weight;
        }
    }
    Affinity::new(a)
}

/// Heat-kernel affinity `exp(−‖xᵢ−xⱼ‖² / (2σ²))`, zero diagonal.
pub fn gaussian_affinity(x: &Matrix, sigma: f64) -> Result<Affinity> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("kernel width must be positive, got {sigma}")));
    }
    let denom = 2.0 * sigma * sigma;
    let mut a = sq_distances(x).map(|d| (-d / denom).exp());
    a.fill_diagonal(0.0);
    Affinity::new(a)
}
