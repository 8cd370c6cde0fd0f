use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use jflmsc::{MetricReport, MultiViewDataset};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Shape and content hash of the input dataset, before any normalization.
#[derive(Debug, Serialize)]
pub struct DatasetFingerprint {
    pub n_samples: usize,
    pub dims: Vec<usize>,
    pub has_labels: bool,
    pub sha256: String,
}

impl DatasetFingerprint {
    /// Hashes every view's shape and little-endian values (column-major),
    /// then the labels.
    pub fn of(ds: &MultiViewDataset) -> Self {
        let mut h = Sha256::new();
        for v in &ds.views {
            h.update((v.values.nrows() as u64).to_le_bytes());
            h.update((v.values.ncols() as u64).to_le_bytes());
            for x in v.values.iter() {
                h.update(x.to_le_bytes());
            }
        }
        if let Some(labels) = &ds.labels {
            for l in labels {
                h.update(l.to_le_bytes());
            }
        }
        Self {
            n_samples: ds.n_samples(),
            dims: ds.dims(),
            has_labels: ds.labels.is_some(),
            sha256: h.finalize().iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

/// Metrics in percent, four decimals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PercentMetrics {
    pub acc: f64,
    pub nmi: f64,
    pub ari: f64,
    pub precision: f64,
    pub fscore: f64,
}

fn percent(x: f64) -> f64 {
    (x * 1e6).round() / 1e4
}

impl From<MetricReport> for PercentMetrics {
    fn from(m: MetricReport) -> Self {
        Self {
            acc: percent(m.acc),
            nmi: percent(m.nmi),
            ari: percent(m.ari),
            precision: percent(m.precision),
            fscore: percent(m.fscore),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub config: C,
    pub dataset: DatasetFingerprint,
    pub labels: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<PercentMetrics>,
    pub converged: bool,
    pub iterations: usize,
    pub timing: Timing,
}

pub fn metrics_for(ds: &MultiViewDataset, labels: &[usize]) -> Result<Option<PercentMetrics>> {
    ds.labels
        .as_ref()
        .map(|truth| Ok(MetricReport::compute(truth, labels)?.into()))
        .transpose()
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}
