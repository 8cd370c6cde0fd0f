use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use jflmsc::data::{self, SynthSpec};
use jflmsc::metrics::{self, MetricReport, NmiNorm};
use jflmsc::solver::{self, SolverConfig};
use jflmsc::spectral::{self, CutKind, BASELINE_SIGMA};
use jflmsc::{Ablation, MultiViewDataset};
use rayon::prelude::*;
use serde::Serialize;

use crate::manifest::{self, DatasetFingerprint, PercentMetrics, RunManifest, Timing};
use crate::{BaselineArgs, ClusterArgs, EvalArgs, SolverArgs, SweepArgs, SynthArgs};

pub fn synth(args: SynthArgs) -> Result<()> {
    let spec = SynthSpec {
        clusters: args.clusters,
        samples_per_cluster: args.per_cluster,
        view_dims: args.dims,
        within_cluster_std: args.std,
        between_cluster_separation: args.separation,
        noise_feature_counts: args.noise.unwrap_or_default(),
        seed: args.seed,
    };
    let ds = data::generate_synthetic(&spec)?;
    data::save_dataset(&ds, &args.out)?;
    Ok(())
}

fn load(dir: &Path) -> Result<MultiViewDataset> {
    data::load_dataset(dir).with_context(|| format!("loading dataset from {}", dir.display()))
}

/// Defaults, then the config file, then explicit flags.
fn base_config(args: &SolverArgs, ds: &MultiViewDataset) -> Result<SolverConfig> {
    let mut from_file = false;
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let table: toml::Table = text.parse().with_context(|| format!("parsing {}", path.display()))?;
            from_file = table.contains_key("n_clusters");
            toml::Value::Table(table)
                .try_into::<SolverConfig>()
                .with_context(|| format!("in {}", path.display()))?
        }
        None => SolverConfig::default(),
    };
    macro_rules! overlay {
        ($($field:ident),*) => {$(
            if let Some(v) = args.$field {
                cfg.$field = v;
            }
        )*};
    }
    overlay!(mu0, rho, mu_max, max_iter, tol, k_init, ablation, labels_from, normalize, seed);
    if args.sequential_views {
        cfg.parallel_views = false;
    }
    cfg.n_clusters = match (args.clusters, from_file, ds.n_clusters()) {
        (Some(c), _, _) => c,
        (None, true, _) => cfg.n_clusters,
        (None, false, Some(c)) => c,
        (None, false, None) => bail!("--clusters is required when the dataset has no labels.csv"),
    };
    Ok(cfg)
}

/// Applies the ablation's forced `λ₂ = 0` so the echoed config shows it.
fn with_lambdas(mut cfg: SolverConfig, l1: Option<f64>, l2: Option<f64>, l3: Option<f64>) -> SolverConfig {
    cfg.lambda1 = l1.unwrap_or(cfg.lambda1);
    cfg.lambda2 = l2.unwrap_or(cfg.lambda2);
    cfg.lambda3 = l3.unwrap_or(cfg.lambda3);
    if cfg.ablation == Ablation::NoSpectralNormEq6 {
        cfg.lambda2 = 0.0;
    }
    cfg
}

fn default_trace_path(out: &Path) -> PathBuf {
    out.with_extension("trace.csv")
}

pub fn cluster(args: ClusterArgs) -> Result<()> {
    let ds = load(&args.data)?;
    let cfg = with_lambdas(base_config(&args.solver, &ds)?, args.lambda1, args.lambda2, args.lambda3);
    let start = Instant::now();
    let result = solver::solve(&ds, &cfg)?;
    let seconds = start.elapsed().as_secs_f64();

    let trace_path = args.trace.unwrap_or_else(|| default_trace_path(&args.out));
    fs::write(&trace_path, result.trace.to_csv())
        .with_context(|| format!("writing {}", trace_path.display()))?;
    let manifest = RunManifest {
        metrics: manifest::metrics_for(&ds, &result.labels)?,
        config: cfg,
        dataset: DatasetFingerprint::of(&ds),
        labels: result.labels,
        weights: result.weights,
        converged: result.converged,
        iterations: result.iterations,
        timing: Timing { seconds },
    };
    manifest::write_json(&args.out, &manifest)
}

#[derive(Debug, Serialize)]
struct BaselineConfig {
    method: &'static str,
    n_clusters: usize,
    seed: u64,
    sigma: f64,
    cut: CutKind,
}

pub fn baseline(args: BaselineArgs) -> Result<()> {
    let ds = load(&args.data)?;
    let start = Instant::now();
    let labels = spectral::ncut_baseline_with(&ds, args.clusters, args.seed, args.cut)?;
    let seconds = start.elapsed().as_secs_f64();
    let manifest = RunManifest {
        config: BaselineConfig {
            method: "ncut_baseline",
            n_clusters: args.clusters,
            seed: args.seed,
            sigma: BASELINE_SIGMA,
            cut: args.cut,
        },
        dataset: DatasetFingerprint::of(&ds),
        metrics: manifest::metrics_for(&ds, &labels)?,
        labels,
        weights: Vec::new(),
        converged: true,
        iterations: 0,
        timing: Timing { seconds },
    };
    manifest::write_json(&args.out, &manifest)
}

#[derive(Debug, Serialize)]
struct SweepRow {
    lambda1: f64,
    lambda2: f64,
    lambda3: f64,
    acc: f64,
    nmi: f64,
    ari: f64,
    precision: f64,
    fscore: f64,
    iterations: usize,
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let ds = load(&args.data)?;
    let truth = ds
        .labels
        .clone()
        .ok_or_else(|| anyhow!("sweep needs labels.csv in {}", args.data.display()))?;
    let base = base_config(&args.solver, &ds)?;
    let axis = |v: &Option<Vec<f64>>, default: f64| v.clone().unwrap_or_else(|| vec![default]);
    let (l1, l2, l3) = (
        axis(&args.lambda1, base.lambda1),
        axis(&args.lambda2, base.lambda2),
        axis(&args.lambda3, base.lambda3),
    );
    let mut grid = Vec::with_capacity(l1.len() * l2.len() * l3.len());
    for &a in &l1 {
        for &b in &l2 {
            for &c in &l3 {
                grid.push(with_lambdas(base.clone(), Some(a), Some(b), Some(c)));
            }
        }
    }
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|cfg| {
            let r = solver::solve(&ds, cfg)?;
            let m = PercentMetrics::from(MetricReport::compute(&truth, &r.labels)?);
            Ok(SweepRow {
                lambda1: cfg.lambda1,
                lambda2: cfg.lambda2,
                lambda3: cfg.lambda3,
                acc: m.acc,
                nmi: m.nmi,
                ari: m.ari,
                precision: m.precision,
                fscore: m.fscore,
                iterations: r.iterations,
            })
        })
        .collect::<Result<_>>()?;

    let mut w = csv::Writer::from_path(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn eval(args: EvalArgs) -> Result<()> {
    let truth = data::load_labels(&args.truth)?;
    let pred = data::load_labels(&args.pred)?;
    let mut report = MetricReport::compute(&truth, &pred)?;
    if args.nmi_arithmetic {
        report.nmi = metrics::nmi_with(&truth, &pred, NmiNorm::Arithmetic)?;
    }
    let out = PercentMetrics::from(report);
    match &args.out {
        Some(path) => manifest::write_json(path, &out),
        None => {
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(())
        }
    }
}
