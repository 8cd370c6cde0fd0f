//! Reference implementations used as oracles. Each one is written directly
//! from the definition, independent of the library code it checks.

#![allow(dead_code)]

use std::collections::HashMap;

use jflmsc::solver::{SolverState, ViewData, ViewState};
use jflmsc::Matrix;
use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Exact `argmin ‖a − v‖²` over `{a ≥ 0, Σa = 1, a[excluded] = 0}` by
/// enumerating every support set and keeping the best feasible candidate.
pub fn simplex_qp_oracle(v: &[f64], excluded: usize) -> Vec<f64> {
    let free: Vec<usize> = (0..v.len()).filter(|&j| j != excluded).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << free.len()) {
        let support: Vec<usize> = free
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .map(|(_, &j)| j)
            .collect();
        let shift = (1.0 - support.iter().map(|&j| v[j]).sum::<f64>()) / support.len() as f64;
        let mut a = vec![0.0; v.len()];
        let mut feasible = true;
        for &j in &support {
            a[j] = v[j] + shift;
            if a[j] < 0.0 {
                feasible = false;
            }
        }
        if !feasible {
            continue;
        }
        let dist: f64 = a.iter().zip(v).map(|(x, y)| (x - y).powi(2)).sum();
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((dist, a));
        }
    }
    best.expect("some support is always feasible").1
}

/// Projection onto `{a ≥ 0, Σa = radius}` by bisection on the threshold.
pub fn simplex_bisection(v: &[f64], radius: f64) -> Vec<f64> {
    let mass = |eta: f64| v.iter().map(|x| (x + eta).max(0.0)).sum::<f64>();
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (-max, radius - max + radius.abs() + 1.0);
    while mass(hi) < radius {
        hi += hi.abs() + 1.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) < radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eta = 0.5 * (lo + hi);
    v.iter().map(|x| (x + eta).max(0.0)).collect()
}

/// Projection onto the nuclear-norm ball of radius `t`, via bisection on
/// the singular-value threshold.
pub fn nuclear_ball_oracle(m: &Matrix, t: f64) -> Matrix {
    let svd = m.clone().svd(true, true);
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    if sigma.iter().sum::<f64>() <= t {
        return m.clone();
    }
    let projected = simplex_bisection(&sigma, t);
    let u = svd.u.unwrap();
    let v_t = svd.v_t.unwrap();
    let mut out = Matrix::zeros(m.nrows(), m.ncols());
    for (k, s) in projected.iter().enumerate() {
        out += u.column(k) * v_t.row(k) * *s;
    }
    out
}

/// Largest singular value as the square root of the top eigenvalue of
/// `MᵀM` from a symmetric eigensolver (no SVD involved).
pub fn spectral_norm_eig(m: &Matrix) -> f64 {
    let g = m.transpose() * m;
    let top = SymmetricEigen::new(g).eigenvalues.max();
    top.max(0.0).sqrt()
}

pub fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Row-stochastic matrix with zero diagonal and some exact zeros.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        let mut row: Vec<f64> = (0..n)
            .map(|j| {
                if j == i || rng.random::<f64>() < 0.3 {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        if row.iter().sum::<f64>() == 0.0 {
            row[(i + 1) % n] = 1.0;
        }
        let total: f64 = row.iter().sum();
        for j in 0..n {
            a[(i, j)] = row[j] / total;
        }
    }
    a
}

pub fn random_orthonormal(rng: &mut ChaCha8Rng, n: usize, c: usize) -> Matrix {
    gaussian(rng, n, c).qr().q()
}

/// A generic iterate: every primal block, multiplier and weight vector drawn
/// at random (feasible where the model constrains it).
pub fn random_problem(
    rng: &mut ChaCha8Rng,
    n: usize,
    dims: &[usize],
    c: usize,
) -> (Vec<ViewData>, SolverState) {
    let mut data = Vec::new();
    let mut views = Vec::new();
    for &d in dims {
        let x = gaussian(rng, d, n);
        data.push(ViewData::new(x).unwrap());
        views.push(ViewState {
            z: gaussian(rng, n, n) * 0.3,
            a: random_graph(rng, n),
            u: gaussian(rng, n, n) * 0.3,
            e: gaussian(rng, d, n) * 0.3,
            lambda1: gaussian(rng, d, n),
            lambda2: gaussian(rng, n, n),
            lambda3: gaussian(rng, n, n),
            w: random_simplex(rng, d),
        });
    }
    let mu = 10f64.powf(rng.random_range(-2.0..1.0));
    let q = random_orthonormal(rng, n, c);
    (data, SolverState { views, q, mu })
}

/// `Σ_ij a_ij Σ_k w_k² (x_ki − x_kj)²` by explicit loops.
pub fn local_term(x: &Matrix, w: &[f64], a: &Matrix) -> f64 {
    let n = x.ncols();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut d = 0.0;
            for k in 0..x.nrows() {
                d += w[k] * w[k] * (x[(k, i)] - x[(k, j)]).powi(2);
            }
            total += a[(i, j)] * d;
        }
    }
    total
}

/// `2 Tr(Qᵀ L Q)` for `L` the Laplacian of `(A + Aᵀ)/2`, written as the
/// pairwise sum `Σ_ij a_ij ‖q_i − q_j‖²`.
pub fn embedding_term(q: &Matrix, a: &Matrix) -> f64 {
    let n = a.nrows();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += a[(i, j)] * (q.row(i) - q.row(j)).norm_squared();
        }
    }
    total
}

/// Sum of the `c` smallest eigenvalues from a full decomposition.
pub fn smallest_eigen_sum(m: &Matrix, c: usize) -> f64 {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev[..c].iter().sum()
}

pub fn random_labels(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<u32> {
    (0..n).map(|_| rng.random_range(0..k as u32)).collect()
}

/// Pair counts `(both same, pred only, truth only, neither)` over all
/// unordered pairs.
pub fn pair_counts<A: PartialEq, B: PartialEq>(truth: &[A], pred: &[B]) -> (f64, f64, f64, f64) {
    let (mut tp, mut fp, mut fn_, mut tn) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..truth.len() {
        for j in i + 1..truth.len() {
            match (truth[i] == truth[j], pred[i] == pred[j]) {
                (true, true) => tp += 1.0,
                (false, true) => fp += 1.0,
                (true, false) => fn_ += 1.0,
                (false, false) => tn += 1.0,
            }
        }
    }
    (tp, fp, fn_, tn)
}

pub fn ari_oracle<A: PartialEq, B: PartialEq>(truth: &[A], pred: &[B]) -> f64 {
    let (a, b, c, d) = pair_counts(truth, pred);
    let denom = (a + b) * (b + d) + (a + c) * (c + d);
    if denom == 0.0 {
        return if b == 0.0 && c == 0.0 { 1.0 } else { 0.0 };
    }
    2.0 * (a * d - b * c) / denom
}

pub fn prf_oracle<A: PartialEq, B: PartialEq>(truth: &[A], pred: &[B]) -> (f64, f64, f64) {
    let (tp, fp, fn_, _) = pair_counts(truth, pred);
    let p = if tp + fp == 0.0 { 1.0 } else { tp / (tp + fp) };
    let r = if tp + fn_ == 0.0 { 1.0 } else { tp / (tp + fn_) };
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn dense(labels: &[u32]) -> (Vec<usize>, usize) {
    let mut map = HashMap::new();
    let out = labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect();
    (out, map.len())
}

/// Best matched fraction over every bijection between label sets.
pub fn accuracy_oracle(truth: &[u32], pred: &[u32]) -> f64 {
    let (t, kt) = dense(truth);
    let (p, kp) = dense(pred);
    let k = kt.max(kp);
    let mut best = 0;
    for perm in all_permutations(k) {
        let hits = t.iter().zip(&p).filter(|(a, b)| perm[**b] == **a).count();
        best = best.max(hits);
    }
    best as f64 / truth.len() as f64
}

/// `I(T;P) / sqrt(H(T) H(P))` straight from the joint and marginal counts.
pub fn nmi_oracle(truth: &[u32], pred: &[u32]) -> f64 {
    let n = truth.len() as f64;
    let mut joint: HashMap<(u32, u32), f64> = HashMap::new();
    let mut mt: HashMap<u32, f64> = HashMap::new();
    let mut mp: HashMap<u32, f64> = HashMap::new();
    for (&a, &b) in truth.iter().zip(pred) {
        *joint.entry((a, b)).or_default() += 1.0;
        *mt.entry(a).or_default() += 1.0;
        *mp.entry(b).or_default() += 1.0;
    }
    let h = |m: &HashMap<u32, f64>| -> f64 { m.values().map(|c| -(c / n) * (c / n).ln()).sum() };
    let (ht, hp) = (h(&mt), h(&mp));
    if ht == 0.0 && hp == 0.0 {
        return 1.0;
    }
    if ht == 0.0 || hp == 0.0 {
        return 0.0;
    }
    let mi: f64 = joint
        .iter()
        .map(|(&(a, b), &c)| (c / n) * ((c * n) / (mt[&a] * mp[&b])).ln())
        .sum();
    mi / (ht * hp).sqrt()
}
