mod common;

use jflmsc::data::{generate_synthetic, load_dataset, save_dataset, SynthSpec};
use jflmsc::metrics;
use jflmsc::solver::{self, solve_with_observer, SolverConfig};
use jflmsc::spectral;
use jflmsc::{Ablation, LabelSource, Matrix, MultiViewDataset, Normalization};

use common::*;

fn small() -> MultiViewDataset {
    generate_synthetic(&SynthSpec {
        samples_per_cluster: 10,
        view_dims: vec![4, 6],
        ..SynthSpec::default()
    })
    .unwrap()
}

#[test]
fn zero_budget_labels_from_initialization() {
    let ds = small();
    let cfg = SolverConfig {
        max_iter: 0,
        ..SolverConfig::with_clusters(3)
    };
    let r = solver::solve(&ds, &cfg).unwrap();
    assert!(r.trace.is_empty());
    assert!(!r.converged);
    assert_eq!(r.iterations, 0);
    assert_eq!(r.labels.len(), 30);
    assert!(r.labels.iter().all(|&l| l < 3));
    for (w, d) in r.weights.iter().zip(ds.dims()) {
        assert!(w.iter().all(|&x| x == 1.0 / d as f64));
    }
}

#[test]
fn state_invariants_hold_every_iteration() {
    let ds = small();
    let cfg = SolverConfig {
        max_iter: 40,
        ..SolverConfig::with_clusters(3)
    };
    let mut rows = 0;
    let mut mu = cfg.mu0;
    let r = solve_with_observer(&ds, &cfg, |state, row| {
        rows += 1;
        assert_eq!(row.iteration, rows);
        assert_eq!(row.mu, mu);
        mu = (mu * cfg.rho).min(cfg.mu_max);
        for v in &state.views {
            for i in 0..v.a.nrows() {
                assert_eq!(v.a[(i, i)], 0.0);
                assert!((v.a.row(i).sum() - 1.0).abs() <= 1e-9);
            }
            assert!(v.a.iter().all(|&x| x >= 0.0));
            assert!(v.w.iter().all(|&x| x >= 0.0));
            assert!((v.w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
        let c = state.q.ncols();
        assert!((state.q.transpose() * &state.q - Matrix::identity(c, c)).norm() <= 1e-9);
        assert!(row.objective.is_finite());
    })
    .unwrap();
    assert_eq!(rows, r.trace.len());
}

#[test]
fn mu_schedule_matches_closed_form() {
    let ds = small();
    let cfg = SolverConfig {
        max_iter: 150,
        tol: 1e-300,
        ..SolverConfig::with_clusters(3)
    };
    let r = solver::solve(&ds, &cfg).unwrap();
    for row in &r.trace.rows {
        let k = (row.iteration - 1) as f64;
        let closed = cfg.mu0 * cfg.rho.powf(k);
        assert!(((row.mu - closed) / closed).abs() <= 1e-15);
    }
    let saturating = SolverConfig {
        mu_max: 2e-3,
        max_iter: 20,
        tol: 1e-300,
        ..SolverConfig::with_clusters(3)
    };
    let r = solver::solve(&ds, &saturating).unwrap();
    assert_eq!(r.trace.last().unwrap().mu, 2e-3);
}

#[test]
fn unregularized_model_drives_residuals_below_tol() {
    let mut rng = rng(31);
    for _ in 0..2 {
        let views = vec![gaussian(&mut rng, 5, 40), gaussian(&mut rng, 8, 40)];
        let ds = MultiViewDataset::from_matrices(views, None).unwrap();
        let cfg = SolverConfig {
            lambda1: 0.0,
            lambda2: 0.0,
            lambda3: 0.0,
            ..SolverConfig::with_clusters(3)
        };
        let r = solver::solve(&ds, &cfg).unwrap();
        assert!(r.converged, "last row {:?}", r.trace.last());
        assert!(r.iterations <= 200);
    }
}

#[test]
fn repeated_runs_are_identical() {
    let ds = small();
    let cfg = SolverConfig {
        seed: 3,
        ..SolverConfig::with_clusters(3)
    };
    let a = solver::solve(&ds, &cfg).unwrap();
    let b = solver::solve(
        &ds,
        &SolverConfig {
            parallel_views: false,
            ..cfg.clone()
        },
    )
    .unwrap();
    assert_eq!(a.labels, b.labels);
    assert_eq!(a.trace.to_csv(), b.trace.to_csv());
    assert_eq!(a.state, b.state);
}

#[test]
fn ablation_modes_freeze_weights() {
    let ds = small();
    for ablation in [Ablation::UniformWeightsEq7, Ablation::NoSpectralNormEq6] {
        let cfg = SolverConfig {
            ablation,
            max_iter: 20,
            ..SolverConfig::with_clusters(3)
        };
        let r = solver::solve(&ds, &cfg).unwrap();
        for (w, d) in r.weights.iter().zip(ds.dims()) {
            assert!(w.iter().all(|&x| x == 1.0 / d as f64));
        }
    }
    let full = solver::solve(
        &ds,
        &SolverConfig {
            max_iter: 20,
            ..SolverConfig::with_clusters(3)
        },
    )
    .unwrap();
    assert!(full.weights[0].iter().any(|&x| x != 0.25));
}

#[test]
fn eq6_matches_full_model_with_zero_lambda2_and_frozen_weights() {
    let ds = small();
    let eq6 = SolverConfig {
        ablation: Ablation::NoSpectralNormEq6,
        max_iter: 30,
        ..SolverConfig::with_clusters(3)
    };
    let eq7 = SolverConfig {
        ablation: Ablation::UniformWeightsEq7,
        lambda2: 0.0,
        ..eq6.clone()
    };
    let a = solver::solve(&ds, &eq6).unwrap();
    let b = solver::solve(&ds, &eq7).unwrap();
    assert_eq!(a.trace, b.trace);
}

#[test]
fn graph_label_source_recovers_clusters() {
    let ds = small();
    let cfg = SolverConfig {
        labels_from: LabelSource::Graph,
        ..SolverConfig::with_clusters(3)
    };
    let r = solver::solve(&ds, &cfg).unwrap();
    let f = &r.fused_similarity.values;
    assert!((f - f.transpose()).amax() == 0.0);
    assert!(metrics::accuracy(ds.labels.as_ref().unwrap(), &r.labels).unwrap() >= 0.95);
}

#[test]
fn normalization_is_applied_before_solving() {
    let ds = small();
    let scaled = MultiViewDataset::from_matrices(
        ds.views.iter().map(|v| &v.values * 37.0).collect(),
        ds.labels.clone(),
    )
    .unwrap();
    let cfg = SolverConfig {
        max_iter: 10,
        ..SolverConfig::with_clusters(3)
    };
    let a = solver::solve(&ds, &cfg).unwrap();
    let b = solver::solve(&scaled, &cfg).unwrap();
    assert_eq!(a.labels, b.labels);
    for (x, y) in a.trace.rows.iter().zip(&b.trace.rows) {
        assert!((x.objective - y.objective).abs() <= 1e-9 * x.objective.abs());
    }
    let raw = SolverConfig {
        normalize: Normalization::None,
        ..cfg
    };
    let c = solver::solve(&scaled, &raw).unwrap();
    assert_ne!(a.trace, c.trace);
}

#[test]
fn rejects_bad_cluster_counts() {
    let ds = small();
    assert!(solver::solve(&ds, &SolverConfig::with_clusters(31)).is_err());
    assert!(solver::solve(&ds, &SolverConfig::with_clusters(1)).is_err());
}

#[test]
fn baseline_invariant_to_sample_order() {
    let ds = generate_synthetic(&SynthSpec {
        samples_per_cluster: 15,
        view_dims: vec![3, 3],
        between_cluster_separation: 8.0,
        ..SynthSpec::default()
    })
    .unwrap();
    let n = ds.n_samples();
    let perm: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
    let permuted = MultiViewDataset::from_matrices(
        ds.views.iter().map(|v| v.values.select_columns(&perm)).collect(),
        None,
    )
    .unwrap();
    let a = spectral::ncut_baseline(&ds, 3, 5).unwrap();
    let b = spectral::ncut_baseline(&permuted, 3, 5).unwrap();
    let a_perm: Vec<usize> = perm.iter().map(|&i| a[i]).collect();
    assert!(metrics::ari(&a_perm, &b).unwrap() >= 0.99);
}

#[test]
fn baseline_single_view_is_plain_spectral_clustering() {
    let ds = small();
    let single = MultiViewDataset::from_matrices(vec![ds.views[0].values.clone()], None).unwrap();
    let s = jflmsc::graph::gaussian_affinity(&single.views[0].values, spectral::BASELINE_SIGMA).unwrap();
    let want = spectral::spectral_cluster(&s.values, 3, 9, spectral::CutKind::Normalized).unwrap();
    assert_eq!(spectral::ncut_baseline(&single, 3, 9).unwrap(), want);
    assert_eq!(spectral::ncut_baseline(&single, 3, 9).unwrap(), want);
}

#[test]
fn baseline_recovers_far_separated_groups() {
    let mut x = Matrix::zeros(2, 12);
    for i in 0..12 {
        let base = if i < 6 { 0.0 } else { 50.0 };
        x[(0, i)] = base + (i % 6) as f64 * 0.1;
        x[(1, i)] = base;
    }
    let ds = MultiViewDataset::from_matrices(vec![x], None).unwrap();
    let labels = spectral::ncut_baseline(&ds, 2, 0).unwrap();
    let truth: Vec<usize> = (0..12).map(|i| i / 6).collect();
    assert_eq!(metrics::accuracy(&truth, &labels).unwrap(), 1.0);
}

#[test]
fn dataset_round_trips_through_files() {
    let ds = small();
    let dir = tempfile::tempdir().unwrap();
    save_dataset(&ds, dir.path()).unwrap();
    let back = load_dataset(dir.path()).unwrap();
    assert_eq!(back, ds);
}
