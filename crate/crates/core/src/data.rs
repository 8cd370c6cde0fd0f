//! Multi-view datasets: representation, CSV ingestion, normalization and a
//! synthetic Gaussian-cluster generator.
//!
//! On disk a dataset is a directory holding `view_1.csv`, `view_2.csv`, ...
//! (one sample per row, comma separated, no header) and an optional
//! `labels.csv` with one integer per row. In memory every view is stored
//! features × samples, so sample `i` of view `v` is column `i` of
//! `views[v].values`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::Matrix;

/// One view's data matrix, `d_v × n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewMatrix {
    pub values: Matrix,
    /// Zero-based position of this view in its dataset.
    pub view_index: usize,
}

impl ViewMatrix {
    pub fn new(values: Matrix, view_index: usize) -> Result<Self> {
        if values.nrows() == 0 {
            return Err(invalid(format!("view {} has no features", view_index + 1)));
        }
        if values.ncols() < 2 {
            return Err(invalid(format!(
                "view {} has {} samples, need at least 2",
                view_index + 1,
                values.ncols()
            )));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(invalid(format!("view {} has non-finite entries", view_index + 1)));
        }
        Ok(Self { values, view_index })
    }

    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.values.ncols()
    }
}

/// Several views over the same `n` samples, with optional ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiViewDataset {
    pub views: Vec<ViewMatrix>,
    pub labels: Option<Vec<i64>>,
}

impl MultiViewDataset {
    pub fn new(views: Vec<ViewMatrix>, labels: Option<Vec<i64>>) -> Result<Self> {
        let Some(first) = views.first() else {
            return Err(invalid("dataset has no views"));
        };
        let n = first.n_samples();
        for (v, view) in views.iter().enumerate() {
            if view.n_samples() != n {
                return Err(Error::SampleCountMismatch {
                    view: v + 1,
                    expected: n,
                    found: view.n_samples(),
                });
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(crate::error::dim_mismatch(format!(
                    "{} labels for {} samples",
                    l.len(),
                    n
                )));
            }
        }
        Ok(Self { views, labels })
    }

    /// Builds a dataset from raw `d_v × n` matrices.
    pub fn from_matrices(mats: Vec<Matrix>, labels: Option<Vec<i64>>) -> Result<Self> {
        let views = mats
            .into_iter()
            .enumerate()
            .map(|(i, m)| ViewMatrix::new(m, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(views, labels)
    }

    pub fn n_views(&self) -> usize {
        self.views.len()
    }

    pub fn n_samples(&self) -> usize {
        self.views[0].n_samples()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.views.iter().map(ViewMatrix::dim).collect()
    }

    /// Number of distinct ground-truth labels, if labels are present.
    pub fn n_clusters(&self) -> Option<usize> {
        self.labels.as_ref().map(|l| {
            let mut u = l.clone();
            u.sort_unstable();
            u.dedup();
            u.len()
        })
    }

    /// All views stacked feature-wise into one `(Σ d_v) × n` matrix.
    pub fn concatenated(&self) -> Matrix {
        let total: usize = self.dims().iter().sum();
        let n = self.n_samples();
        let mut out = Matrix::zeros(total, n);
        let mut row = 0;
        for view in &self.views {
            out.view_mut((row, 0), (view.dim(), n)).copy_from(&view.values);
            row += view.dim();
        }
        out
    }
}

fn read_rows(path: &Path) -> Result<Vec<(u64, Vec<String>)>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        rows.push((line, rec.iter().map(str::to_owned).collect()));
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    Ok(rows)
}

fn parse_cell<T: std::str::FromStr>(path: &Path, line: u64, cell: &str) -> Result<T> {
    cell.parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: format!("non-numeric cell {cell:?}"),
    })
}

/// Reads one samples-as-rows CSV into a `d × n` matrix.
fn read_view(path: &Path) -> Result<Matrix> {
    let rows = read_rows(path)?;
    let width = rows[0].1.len();
    let n = rows.len();
    let mut m = Matrix::zeros(width, n);
    for (i, (line, cells)) in rows.iter().enumerate() {
        if cells.len() != width {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: *line,
                msg: format!("ragged row: {} columns, expected {width}", cells.len()),
            });
        }
        for (k, cell) in cells.iter().enumerate() {
            let x: f64 = parse_cell(path, *line, cell)?;
            if !x.is_finite() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: *line,
                    msg: format!("non-finite value {cell:?}"),
                });
            }
            m[(k, i)] = x;
        }
    }
    Ok(m)
}

/// Reads a one-integer-per-row label file.
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<i64>> {
    let path = path.as_ref();
    read_rows(path)?
        .into_iter()
        .map(|(line, cells)| {
            if cells.len() != 1 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    msg: format!("expected one label per row, found {}", cells.len()),
                });
            }
            parse_cell(path, line, &cells[0])
        })
        .collect()
}

/// Path of the 1-based view file inside a dataset directory.
pub fn view_path(dir: &Path, view: usize) -> PathBuf {
    dir.join(format!("view_{view}.csv"))
}

/// Loads `view_1.csv … view_k.csv` (stopping at the first missing index)
/// and `labels.csv` when present. Labels are kept verbatim.
pub fn load_dataset(dir: impl AsRef<Path>) -> Result<MultiViewDataset> {
    let dir = dir.as_ref();
    let mut mats = Vec::new();
    loop {
        let path = view_path(dir, mats.len() + 1);
        if !path.exists() {
            break;
        }
        mats.push(read_view(&path)?);
    }
    if mats.is_empty() {
        return Err(Error::NoViews(dir.to_path_buf()));
    }
    let n = mats[0].ncols();
    for (v, m) in mats.iter().enumerate().skip(1) {
        if m.ncols() != n {
            return Err(Error::SampleCountMismatch {
                view: v + 1,
                expected: n,
                found: m.ncols(),
            });
        }
    }
    let labels_path = dir.join("labels.csv");
    let labels = if labels_path.exists() {
        let l = load_labels(&labels_path)?;
        if l.len() != n {
            return Err(Error::Parse {
                path: labels_path,
                line: l.len() as u64,
                msg: format!("{} labels for {n} samples", l.len()),
            });
        }
        Some(l)
    } else {
        None
    };
    MultiViewDataset::from_matrices(mats, labels)
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    f.write_all(body.as_bytes()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes a dataset in the directory layout read by [`load_dataset`].
/// Values use Rust's shortest round-trip float formatting.
pub fn save_dataset(dataset: &MultiViewDataset, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for (v, view) in dataset.views.iter().enumerate() {
        let mut body = String::new();
        for i in 0..view.n_samples() {
            let row: Vec<String> = view.values.column(i).iter().map(|x| x.to_string()).collect();
            body.push_str(&row.join(","));
            body.push('\n');
        }
        write_file(&view_path(dir, v + 1), &body)?;
    }
    if let Some(labels) = &dataset.labels {
        let body: String = labels.iter().map(|l| format!("{l}\n")).collect();
        write_file(&dir.join("labels.csv"), &body)?;
    }
    Ok(())
}

/// Optional per-view preprocessing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    None,
    /// Every sample (column) scaled to unit Euclidean norm; zero columns kept.
    UnitL2PerSample,
    /// Every feature (row) mapped affinely onto `[0, 1]`; constant rows become 0.
    MinmaxPerFeature,
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "unit_l2_per_sample" | "l2" => Ok(Self::UnitL2PerSample),
            "minmax_per_feature" | "minmax" => Ok(Self::MinmaxPerFeature),
            other => Err(invalid(format!("unknown normalization scheme {other:?}"))),
        }
    }
}

pub fn normalize(dataset: &MultiViewDataset, scheme: Normalization) -> MultiViewDataset {
    let mut out = dataset.clone();
    match scheme {
        Normalization::None => {}
        Normalization::UnitL2PerSample => {
            for view in &mut out.views {
                for mut col in view.values.column_iter_mut() {
                    let norm = col.norm();
                    if norm > 0.0 {
                        col /= norm;
                    }
                }
            }
        }
        Normalization::MinmaxPerFeature => {
            for view in &mut out.views {
                for mut row in view.values.row_iter_mut() {
                    let lo = row.min();
                    let hi = row.max();
                    let span = hi - lo;
                    if span > 0.0 {
                        row.apply(|x| *x = (*x - lo) / span);
                    } else {
                        row.fill(0.0);
                    }
                }
            }
        }
    }
    out
}

/// Parameters of the synthetic Gaussian multi-view generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub clusters: usize,
    pub samples_per_cluster: usize,
    /// Informative feature count of each view.
    pub view_dims: Vec<usize>,
    pub within_cluster_std: f64,
    /// Centroid distance divided by `within_cluster_std`.
    pub between_cluster_separation: f64,
    /// Label-independent features appended to each view. Empty means none.
    pub noise_feature_counts: Vec<usize>,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            clusters: 3,
            samples_per_cluster: 30,
            view_dims: vec![10, 10, 10],
            within_cluster_std: 1.0,
            between_cluster_separation: 5.0,
            noise_feature_counts: Vec::new(),
            seed: 1,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.clusters < 2 {
            return Err(invalid("synthetic data needs at least 2 clusters"));
        }
        if self.samples_per_cluster < 2 {
            return Err(invalid("samples_per_cluster must be at least 2"));
        }
        if self.view_dims.is_empty() || self.view_dims.contains(&0) {
            return Err(invalid("every view needs at least one informative feature"));
        }
        if !(self.within_cluster_std > 0.0 && self.within_cluster_std.is_finite()) {
            return Err(invalid("within_cluster_std must be positive"));
        }
        if !(self.between_cluster_separation > 0.0 && self.between_cluster_separation.is_finite())
        {
            return Err(invalid("between_cluster_separation must be positive"));
        }
        if !self.noise_feature_counts.is_empty()
            && self.noise_feature_counts.len() != self.view_dims.len()
        {
            return Err(invalid(format!(
                "{} noise counts for {} views",
                self.noise_feature_counts.len(),
                self.view_dims.len()
            )));
        }
        Ok(())
    }

    /// Standard deviation of the appended noise features: the distance of
    /// each centroid from the origin, so noise spans the same range as the
    /// cluster layout.
    pub fn noise_std(&self) -> f64 {
        self.between_cluster_separation * self.within_cluster_std / std::f64::consts::SQRT_2
    }
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// `c` centroids in `R^d` (as columns) with pairwise distance `dist`.
/// For `d ≥ c` they sit on randomly rotated orthogonal axes and all pairwise
/// distances are exact; otherwise random directions are rescaled so the
/// closest pair is exactly `dist` apart.
fn centroids(rng: &mut ChaCha8Rng, d: usize, c: usize, dist: f64) -> Matrix {
    if d >= c {
        let q = gaussian_matrix(rng, d, c).qr().q();
        q * (dist / std::f64::consts::SQRT_2)
    } else {
        let mut m = gaussian_matrix(rng, d, c);
        let mut min_d = f64::INFINITY;
        for a in 0..c {
            for b in a + 1..c {
                min_d = min_d.min((m.column(a) - m.column(b)).norm());
            }
        }
        if min_d > 0.0 {
            m *= dist / min_d;
        }
        m
    }
}

/// Gaussian clusters per view with shared labels. Samples are ordered by
/// cluster (`samples_per_cluster` of label 0, then label 1, ...).
pub fn generate_synthetic(spec: &SynthSpec) -> Result<MultiViewDataset> {
    spec.validate()?;
    let c = spec.clusters;
    let n = c * spec.samples_per_cluster;
    let sigma = spec.within_cluster_std;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let labels: Vec<i64> = (0..n).map(|i| (i / spec.samples_per_cluster) as i64).collect();

    let mut mats = Vec::with_capacity(spec.view_dims.len());
    for (v, &d) in spec.view_dims.iter().enumerate() {
        let noise = spec.noise_feature_counts.get(v).copied().unwrap_or(0);
        let mu = centroids(&mut rng, d, c, spec.between_cluster_separation * sigma);
        let mut m = Matrix::zeros(d + noise, n);
        for i in 0..n {
            let label = labels[i] as usize;
            for k in 0..d {
                let z: f64 = rng.sample(StandardNormal);
                m[(k, i)] = mu[(k, label)] + sigma * z;
            }
        }
        let noise_std = spec.noise_std();
        for i in 0..n {
            for k in d..d + noise {
                let z: f64 = rng.sample(StandardNormal);
                m[(k, i)] = noise_std * z;
            }
        }
        mats.push(m);
    }
    MultiViewDataset::from_matrices(mats, Some(labels))
}
