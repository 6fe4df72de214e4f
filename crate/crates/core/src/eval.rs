//! Clustering error under optimal label matching, and per-experiment
//! summary statistics.

use crate::error::{Error, Result};
use crate::spectral::LabelVector;

/// Mean / median / population standard deviation of per-trial percent
/// errors, plus mean wall-clock time in seconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialStats {
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
    pub mean_time: f64,
}

/// Minimum-cost perfect matching on a square cost matrix (Hungarian
/// algorithm with potentials, O(n³)). Returns `assignment[row] = col`.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-indexed potentials; column 0 is a sentinel.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let i0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[i0 - 1][col - 1] - u[i0] - v[col];
                if reduced < minv[col] {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
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
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; n];
    for col in 1..=n {
        if owner[col] > 0 {
            assignment[owner[col] - 1] = col - 1;
        }
    }
    assignment
}

/// `counts[p][t]` = number of points with predicted id `p` and true id `t`,
/// padded to a square `k×k` table.
fn confusion(pred: &[usize], truth: &[usize]) -> Vec<Vec<usize>> {
    let k = pred
        .iter()
        .chain(truth)
        .max()
        .map_or(0, |&m| m + 1);
    let mut counts = vec![vec![0usize; k]; k];
    for (&p, &t) in pred.iter().zip(truth) {
        counts[p][t] += 1;
    }
    counts
}

/// Percentage of points misassigned under the label matching that
/// maximizes agreement.
pub fn clustering_error(pred: &LabelVector, truth: &LabelVector) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::Dimension(format!(
            "{} predicted labels vs {} true labels",
            pred.len(),
            truth.len()
        )));
    }
    let n = pred.len();
    if n == 0 {
        return Ok(0.0);
    }
    let pred = LabelVector::contiguous(pred.as_slice());
    let truth = LabelVector::contiguous(truth.as_slice());
    let counts = confusion(pred.as_slice(), truth.as_slice());
    let cost: Vec<Vec<f64>> = counts
        .iter()
        .map(|row| row.iter().map(|&c| -(c as f64)).collect())
        .collect();
    let assignment = hungarian(&cost);
    let agree: usize = assignment
        .iter()
        .enumerate()
        .map(|(p, &t)| counts[p][t])
        .sum();
    Ok(100.0 * (n - agree) as f64 / n as f64)
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

pub fn summarize(errors: &[f64], times: &[f64]) -> Result<TrialStats> {
    if errors.is_empty() {
        return Err(Error::Dimension("no errors to summarize".into()));
    }
    let n = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / n;
    let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n;
    let mean_time = if times.is_empty() {
        0.0
    } else {
        times.iter().sum::<f64>() / times.len() as f64
    };
    Ok(TrialStats {
        mean,
        median: median(errors),
        stddev: var.sqrt(),
        mean_time,
    })
}
