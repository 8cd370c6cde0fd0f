//! External clustering quality metrics: ACC, NMI, ARI and pairwise
//! precision / recall / F-score.
//!
//! Every metric accepts arbitrary label alphabets; labels are compacted to
//! dense indices internally, so relabelling either side never changes a
//! score.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub acc: f64,
    pub nmi: f64,
    pub ari: f64,
    pub precision: f64,
    pub fscore: f64,
}

impl MetricReport {
    pub fn compute<A, B>(truth: &[A], pred: &[B]) -> Result<Self>
    where
        A: Eq + Hash + Copy,
        B: Eq + Hash + Copy,
    {
        let (precision, _, fscore) = pairwise_prf(truth, pred)?;
        Ok(Self {
            acc: accuracy(truth, pred)?,
            nmi: nmi(truth, pred)?,
            ari: ari(truth, pred)?,
            precision,
            fscore,
        })
    }

    /// Copy with every score rounded to four decimals.
    pub fn rounded(&self) -> Self {
        let r = |x: f64| (x * 1e4).round() / 1e4;
        Self {
            acc: r(self.acc),
            nmi: r(self.nmi),
            ari: r(self.ari),
            precision: r(self.precision),
            fscore: r(self.fscore),
        }
    }
}

/// Maps labels to `0..k` in order of first appearance.
pub fn compact_labels<T: Eq + Hash + Copy>(labels: &[T]) -> (Vec<usize>, usize) {
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

/// Contingency counts `table[t][p]` plus both marginals.
struct Contingency {
    table: Vec<Vec<u64>>,
    rows: Vec<u64>,
    cols: Vec<u64>,
    n: u64,
}

impl Contingency {
    fn new<A, B>(truth: &[A], pred: &[B]) -> Result<Self>
    where
        A: Eq + Hash + Copy,
        B: Eq + Hash + Copy,
    {
        if truth.len() != pred.len() {
            return Err(dim_mismatch(format!(
                "{} true labels vs {} predicted",
                truth.len(),
                pred.len()
            )));
        }
        if truth.is_empty() {
            return Err(invalid("cannot score an empty labelling"));
        }
        let (t, kt) = compact_labels(truth);
        let (p, kp) = compact_labels(pred);
        let mut table = vec![vec![0u64; kp]; kt];
        for (a, b) in t.iter().zip(&p) {
            table[*a][*b] += 1;
        }
        let rows = table.iter().map(|r| r.iter().sum()).collect();
        let cols = (0..kp).map(|j| table.iter().map(|r| r[j]).sum()).collect();
        Ok(Self {
            table,
            rows,
            cols,
            n: truth.len() as u64,
        })
    }
}

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// method with potentials, O(k³)). Returns `assign[row] = col`.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let k = cost.len();
    if k == 0 {
        return Vec::new();
    }
    // 1-based arrays with a virtual column 0, as in the classic formulation.
    let mut u = vec![0.0; k + 1];
    let mut v = vec![0.0; k + 1];
    let mut owner = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for row in 1..=k {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![f64::INFINITY; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[col0] = true;
            let r0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0;
            for col in 1..=k {
                if used[col] {
                    continue;
                }
                let cur = cost[r0 - 1][col - 1] - u[r0] - v[col];
                if cur < minv[col] {
                    minv[col] = cur;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=k {
                if used[col] {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; k];
    for col in 1..=k {
        if owner[col] > 0 {
            assign[owner[col] - 1] = col - 1;
        }
    }
    assign
}

/// Best fraction of samples matched under a one-to-one relabelling of the
/// prediction. The confusion matrix is zero-padded to square when the
/// cluster counts differ.
pub fn accuracy<A, B>(truth: &[A], pred: &[B]) -> Result<f64>
where
    A: Eq + Hash + Copy,
    B: Eq + Hash + Copy,
{
    let ct = Contingency::new(truth, pred)?;
    let k = ct.rows.len().max(ct.cols.len());
    let mut cost = vec![vec![0.0; k]; k];
    for (t, row) in ct.table.iter().enumerate() {
        for (p, &count) in row.iter().enumerate() {
            cost[p][t] = -(count as f64);
        }
    }
    let assign = hungarian(&cost);
    let matched: u64 = assign
        .iter()
        .enumerate()
        .filter(|(p, t)| *p < ct.cols.len() && **t < ct.rows.len())
        .map(|(p, &t)| ct.table[t][p])
        .sum();
    Ok(matched as f64 / ct.n as f64)
}

/// Normalization of mutual information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NmiNorm {
    /// `I / sqrt(H(T)·H(P))`.
    #[default]
    Geometric,
    /// `2I / (H(T) + H(P))`.
    Arithmetic,
}

fn entropy(counts: &[u64], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

pub fn nmi<A, B>(truth: &[A], pred: &[B]) -> Result<f64>
where
    A: Eq + Hash + Copy,
    B: Eq + Hash + Copy,
{
    nmi_with(truth, pred, NmiNorm::Geometric)
}

/// Normalized mutual information. Two single-cluster partitions score 1;
/// exactly one single-cluster partition scores 0.
pub fn nmi_with<A, B>(truth: &[A], pred: &[B], norm: NmiNorm) -> Result<f64>
where
    A: Eq + Hash + Copy,
    B: Eq + Hash + Copy,
{
    let ct = Contingency::new(truth, pred)?;
    let n = ct.n as f64;
    let ht = entropy(&ct.rows, n);
    let hp = entropy(&ct.cols, n);
    match (ct.rows.len() == 1, ct.cols.len() == 1) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }
    let mut mi = 0.0;
    for (t, row) in ct.table.iter().enumerate() {
        for (p, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = c as f64;
            mi += c / n * ((c * n) / (ct.rows[t] as f64 * ct.cols[p] as f64)).ln();
        }
    }
    let denom = match norm {
        NmiNorm::Geometric => (ht * hp).sqrt(),
        NmiNorm::Arithmetic => 0.5 * (ht + hp),
    };
    Ok((mi / denom).clamp(0.0, 1.0))
}

fn comb2(x: u64) -> f64 {
    (x as f64) * (x.saturating_sub(1) as f64) / 2.0
}

/// Adjusted Rand index. When the expected and maximum indices coincide
/// (both partitions trivial) the score is 1 if the partitions agree and 0
/// otherwise.
pub fn ari<A, B>(truth: &[A], pred: &[B]) -> Result<f64>
where
    A: Eq + Hash + Copy,
    B: Eq + Hash + Copy,
{
    if truth.len() < 2 {
        return Err(invalid("ARI needs at least two samples"));
    }
    let ct = Contingency::new(truth, pred)?;
    let index: f64 = ct.table.iter().flatten().map(|&c| comb2(c)).sum();
    let sum_t: f64 = ct.rows.iter().map(|&c| comb2(c)).sum();
    let sum_p: f64 = ct.cols.iter().map(|&c| comb2(c)).sum();
    let total = comb2(ct.n);
    let expected = sum_t * sum_p / total;
    let max_index = 0.5 * (sum_t + sum_p);
    let denom = max_index - expected;
    if denom == 0.0 {
        return Ok(if index == max_index { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / denom)
}

/// Pair-counting `(precision, recall, fscore)` over unordered sample pairs.
/// An empty denominator gives precision or recall 1; fscore is 0 when both
/// are 0.
pub fn pairwise_prf<A, B>(truth: &[A], pred: &[B]) -> Result<(f64, f64, f64)>
where
    A: Eq + Hash + Copy,
    B: Eq + Hash + Copy,
{
    if truth.len() < 2 {
        return Err(invalid("pairwise scores need at least two samples"));
    }
    let ct = Contingency::new(truth, pred)?;
    let tp: f64 = ct.table.iter().flatten().map(|&c| comb2(c)).sum();
    let same_pred: f64 = ct.cols.iter().map(|&c| comb2(c)).sum();
    let same_truth: f64 = ct.rows.iter().map(|&c| comb2(c)).sum();
    let fp = same_pred - tp;
    let fn_ = same_truth - tp;
    let precision = if tp + fp == 0.0 { 1.0 } else { tp / (tp + fp) };
    let recall = if tp + fn_ == 0.0 { 1.0 } else { tp / (tp + fn_) };
    let fscore = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok((precision, recall, fscore))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy(&[0, 0, 1, 1], &[0, 0, 1, 1]).unwrap(), 1.0);
        assert_eq!(accuracy(&[0, 0, 1, 1], &[1, 1, 0, 0]).unwrap(), 1.0);
        assert_eq!(accuracy(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap(), 0.5);
        assert_eq!(accuracy(&[0, 0, 1, 1], &[5, 5, 5, 5]).unwrap(), 0.5);
        assert_eq!(accuracy(&[0, 0, 0, 0], &[1, 2, 3, 3]).unwrap(), 0.5);
        assert!(accuracy::<i32, i32>(&[], &[]).is_err());
        assert!(accuracy(&[0, 1], &[0]).is_err());
    }

    #[test]
    fn hungarian_small() {
        let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        let a = hungarian(&cost);
        let total: f64 = a.iter().enumerate().map(|(r, &c)| cost[r][c]).sum();
        assert_eq!(total, 5.0);
    }

    #[test]
    fn nmi_examples() {
        assert!((nmi(&[0, 0, 1, 1, 2], &[2, 2, 0, 0, 1]).unwrap() - 1.0).abs() < 1e-12);
        assert!(nmi(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap().abs() < 1e-12);
        assert_eq!(nmi(&[3, 3, 3], &[1, 1, 1]).unwrap(), 1.0);
        assert_eq!(nmi(&[0, 1, 1], &[1, 1, 1]).unwrap(), 0.0);
        let arith = nmi_with(&[0, 0, 1, 1, 1], &[0, 0, 0, 1, 1], NmiNorm::Arithmetic).unwrap();
        assert!(arith > 0.0 && arith < 1.0);
    }

    #[test]
    fn ari_examples() {
        assert!((ari(&[0, 0, 1, 1], &[1, 1, 0, 0]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(ari(&[0, 0, 1, 1, 2], &[0, 0, 0, 0, 0]).unwrap(), 0.0);
        assert_eq!(ari(&[0, 1, 2], &[3, 4, 5]).unwrap(), 1.0);
        assert!(ari(&[0], &[0]).is_err());
    }

    #[test]
    fn prf_examples() {
        assert_eq!(pairwise_prf(&[0, 0, 1, 1], &[0, 0, 1, 1]).unwrap(), (1.0, 1.0, 1.0));
        assert_eq!(pairwise_prf(&[0, 0, 1, 1], &[0, 1, 2, 3]).unwrap(), (1.0, 0.0, 0.0));
        let (p, r, f) = pairwise_prf(&[0, 0, 1, 1], &[0, 0, 0, 1]).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-15);
        assert!((r - 0.5).abs() < 1e-15);
        assert!((f - 0.4).abs() < 1e-15);
    }

    #[test]
    fn report_rounds() {
        let r = MetricReport::compute(&[0, 0, 1, 1, 1, 2], &[0, 0, 1, 1, 2, 2]).unwrap();
        let rr = r.rounded();
        assert_eq!(rr.acc, 0.8333);
        assert!((rr.nmi - r.nmi).abs() <= 5e-5);
    }
}
