//! `jflmsc`: synthesize datasets, cluster them, run the NCut baseline,
//! sweep regularization grids and score label files.
//!
//! Every flag can also be set through an environment variable named
//! `JFLMSC_<FLAG>` (for example `JFLMSC_LAMBDA1=0.5`).

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jflmsc::spectral::CutKind;
use jflmsc::{Ablation, LabelSource, Normalization};

#[derive(Debug, Parser)]
#[command(name = "jflmsc", version, about = "Multi-view subspace clustering toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic Gaussian multi-view dataset.
    Synth(SynthArgs),
    /// Run the multi-view solver and write a manifest plus trace CSV.
    Cluster(ClusterArgs),
    /// Concatenated-view NCut spectral clustering.
    Baseline(BaselineArgs),
    /// Solve over a grid of regularization weights.
    Sweep(SweepArgs),
    /// Score predicted labels against ground truth.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, env = "JFLMSC_CLUSTERS", default_value_t = 3)]
    clusters: usize,
    #[arg(long, env = "JFLMSC_PER_CLUSTER", default_value_t = 30)]
    per_cluster: usize,
    /// Informative features per view.
    #[arg(long, env = "JFLMSC_DIMS", default_value = "10,10,10", value_delimiter = ',')]
    dims: Vec<usize>,
    /// Within-cluster standard deviation.
    #[arg(long, env = "JFLMSC_STD", default_value_t = 1.0)]
    std: f64,
    /// Centroid distance as a multiple of the within-cluster deviation.
    #[arg(long, env = "JFLMSC_SEPARATION", default_value_t = 5.0)]
    separation: f64,
    /// Label-independent noise features appended per view.
    #[arg(long, env = "JFLMSC_NOISE", value_delimiter = ',')]
    noise: Option<Vec<usize>>,
    #[arg(long, env = "JFLMSC_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(short, long, env = "JFLMSC_OUT")]
    out: PathBuf,
}

/// Solver settings shared by `cluster` and `sweep`. Unset flags fall back
/// to the config file, then to the built-in defaults.
#[derive(Debug, Args)]
struct SolverArgs {
    /// TOML file with solver settings.
    #[arg(long, env = "JFLMSC_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, env = "JFLMSC_MU0")]
    mu0: Option<f64>,
    #[arg(long, env = "JFLMSC_RHO")]
    rho: Option<f64>,
    #[arg(long, env = "JFLMSC_MU_MAX")]
    mu_max: Option<f64>,
    #[arg(long, env = "JFLMSC_MAX_ITER")]
    max_iter: Option<usize>,
    #[arg(long, env = "JFLMSC_TOL")]
    tol: Option<f64>,
    #[arg(long, env = "JFLMSC_K_INIT")]
    k_init: Option<usize>,
    /// Cluster count; inferred from labels.csv when omitted.
    #[arg(long, env = "JFLMSC_CLUSTERS")]
    clusters: Option<usize>,
    /// full, eq7 (weights frozen) or eq6 (weights frozen, lambda2 = 0).
    #[arg(long, env = "JFLMSC_ABLATION")]
    ablation: Option<Ablation>,
    /// embedding (k-means on Q) or graph (spectral clustering of fused A).
    #[arg(long, env = "JFLMSC_LABELS_FROM")]
    labels_from: Option<LabelSource>,
    /// none, unit_l2_per_sample or minmax_per_feature.
    #[arg(long, env = "JFLMSC_NORMALIZE")]
    normalize: Option<Normalization>,
    #[arg(long, env = "JFLMSC_SEED")]
    seed: Option<u64>,
    /// Run per-view updates sequentially.
    #[arg(long, env = "JFLMSC_SEQUENTIAL_VIEWS")]
    sequential_views: bool,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    /// Dataset directory with view_1.csv, view_2.csv, ... and optional labels.csv.
    data: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, env = "JFLMSC_LAMBDA1")]
    lambda1: Option<f64>,
    #[arg(long, env = "JFLMSC_LAMBDA2")]
    lambda2: Option<f64>,
    #[arg(long, env = "JFLMSC_LAMBDA3")]
    lambda3: Option<f64>,
    /// Manifest JSON path.
    #[arg(short, long, env = "JFLMSC_OUT")]
    out: PathBuf,
    /// Trace CSV path; defaults to the manifest path with a `.trace.csv` suffix.
    #[arg(long, env = "JFLMSC_TRACE")]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BaselineArgs {
    data: PathBuf,
    #[arg(long, env = "JFLMSC_CLUSTERS")]
    clusters: usize,
    #[arg(long, env = "JFLMSC_SEED", default_value_t = 0)]
    seed: u64,
    /// normalized or ratio.
    #[arg(long, env = "JFLMSC_CUT", default_value = "normalized", value_parser = parse_cut)]
    cut: CutKind,
    #[arg(short, long, env = "JFLMSC_OUT")]
    out: PathBuf,
}

fn parse_cut(s: &str) -> Result<CutKind, String> {
    match s {
        "normalized" | "ncut" => Ok(CutKind::Normalized),
        "ratio" => Ok(CutKind::Ratio),
        other => Err(format!("unknown cut {other:?}")),
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    data: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    /// Comma-separated lambda1 values.
    #[arg(long, env = "JFLMSC_LAMBDA1", value_delimiter = ',')]
    lambda1: Option<Vec<f64>>,
    #[arg(long, env = "JFLMSC_LAMBDA2", value_delimiter = ',')]
    lambda2: Option<Vec<f64>>,
    #[arg(long, env = "JFLMSC_LAMBDA3", value_delimiter = ',')]
    lambda3: Option<Vec<f64>>,
    /// Output CSV path.
    #[arg(short, long, env = "JFLMSC_OUT")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Ground-truth label file, one integer per row.
    truth: PathBuf,
    /// Predicted label file, one integer per row.
    pred: PathBuf,
    /// Normalize NMI by the arithmetic mean of the entropies.
    #[arg(long, env = "JFLMSC_NMI_ARITHMETIC")]
    nmi_arithmetic: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(short, long, env = "JFLMSC_OUT")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => commands::synth(a),
        Command::Cluster(a) => commands::cluster(a),
        Command::Baseline(a) => commands::baseline(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Eval(a) => commands::eval(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
