//! Graph Laplacians, normalized spectral clustering, and the cut /
//! spectral-gap cost used to pick a rank.

use nalgebra::SymmetricEigen;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::rng::{self, TAG_KMEANS};

const DEGREE_FLOOR: f64 = 1e-12;
const GAP_FLOOR: f64 = 1e-12;
const KMEANS_RESTARTS: usize = 10;
const KMEANS_MAX_ITER: usize = 100;

/// Cluster assignment, one id per data column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelVector(pub Vec<usize>);

impl LabelVector {
    /// Relabels arbitrary ids to `0..L` in order of first appearance.
    pub fn contiguous(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        LabelVector(
            raw.iter()
                .map(|&id| {
                    let next = map.len();
                    *map.entry(id).or_insert(next)
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `1 + max id`, or 0 when empty.
    pub fn num_clusters(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }

    /// Whether both vectors describe the same partition, ignoring ids.
    pub fn same_partition(&self, other: &LabelVector) -> bool {
        self.len() == other.len()
            && LabelVector::contiguous(&self.0) == LabelVector::contiguous(&other.0)
    }
}

impl From<Vec<usize>> for LabelVector {
    fn from(v: Vec<usize>) -> Self {
        LabelVector(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplacianKind {
    /// `I − D⁻¹Ξ`
    RandomWalk,
    /// `I − D^{-1/2} Ξ D^{-1/2}`
    Symmetric,
}

fn degrees(w: &DenseMatrix) -> Vec<f64> {
    (0..w.rows())
        .map(|i| w.row(i).iter().sum::<f64>().max(DEGREE_FLOOR))
        .collect()
}

fn check_square(w: &DenseMatrix) -> Result<()> {
    if w.rows() != w.cols() || w.is_empty() {
        return Err(Error::Dimension(format!(
            "similarity matrix must be square and non-empty, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    Ok(())
}

pub fn laplacian(w: &DenseMatrix, kind: LaplacianKind) -> Result<DenseMatrix> {
    check_square(w)?;
    let d = degrees(w);
    let n = w.rows();
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        let eye = if i == j { 1.0 } else { 0.0 };
        match kind {
            LaplacianKind::RandomWalk => eye - w[(i, j)] / d[i],
            LaplacianKind::Symmetric => eye - w[(i, j)] / (d[i] * d[j]).sqrt(),
        }
    }))
}

/// `D^{-1/2} Ξ D^{-1/2}`, symmetrized against rounding.
fn normalized_adjacency(w: &DenseMatrix) -> nalgebra::DMatrix<f64> {
    let inv_sqrt: Vec<f64> = degrees(w).iter().map(|d| d.sqrt().recip()).collect();
    let n = w.rows();
    nalgebra::DMatrix::from_fn(n, n, |i, j| {
        0.5 * (w[(i, j)] + w[(j, i)]) * inv_sqrt[i] * inv_sqrt[j]
    })
}

/// Eigenvalues of the random-walk Laplacian, ascending.
///
/// `I − D⁻¹Ξ` is similar to `I − D^{-1/2}ΞD^{-1/2}`, so both share a
/// spectrum and the symmetric form is used.
pub fn random_walk_spectrum(w: &DenseMatrix) -> Result<Vec<f64>> {
    check_square(w)?;
    let eig = SymmetricEigen::new(normalized_adjacency(w));
    let mut vals: Vec<f64> = eig.eigenvalues.iter().map(|mu| 1.0 - mu).collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Normalized spectral clustering on the symmetric Laplacian: the
/// `clusters` eigenvectors with smallest eigenvalues form an embedding whose
/// rows are scaled to unit length and grouped by k-means.
pub fn spectral_clustering<R: Rng + ?Sized>(
    w: &DenseMatrix,
    clusters: usize,
    rng: &mut R,
) -> Result<LabelVector> {
    check_square(w)?;
    let n = w.rows();
    if clusters == 0 || clusters > n {
        return Err(Error::Config(format!(
            "cannot form {clusters} clusters from {n} points"
        )));
    }
    if clusters == 1 {
        return Ok(LabelVector(vec![0; n]));
    }

    let eig = SymmetricEigen::new(normalized_adjacency(w));
    // Smallest Laplacian eigenvalues are the largest adjacency eigenvalues.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .total_cmp(&eig.eigenvalues[a])
            .then(a.cmp(&b))
    });

    let mut embedding = DenseMatrix::from_fn(n, clusters, |i, k| eig.eigenvectors[(i, order[k])]);
    for i in 0..n {
        let norm = embedding.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for k in 0..clusters {
                embedding[(i, k)] /= norm;
            }
        }
    }

    let labels = kmeans(&embedding, clusters, rng.random());
    Ok(LabelVector::contiguous(&labels))
}

struct KmeansRun {
    labels: Vec<usize>,
    inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's k-means over the rows of `points`, best of several
/// D²-seeded restarts. Each restart has its own stream derived from `seed`.
pub fn kmeans(points: &DenseMatrix, k: usize, seed: u64) -> Vec<usize> {
    let best = (0..KMEANS_RESTARTS)
        .into_par_iter()
        .map(|restart| {
            let mut stream = rng::stream(seed, &[TAG_KMEANS, restart as u64]);
            lloyd(points, k, &mut stream)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|best, run| if run.inertia < best.inertia { run } else { best })
        .expect("at least one restart");
    best.labels
}

fn seed_centers<R: Rng + ?Sized>(points: &DenseMatrix, k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let n = points.rows();
    let mut centers = vec![points.row(rng.random_range(0..n)).to_vec()];
    let mut nearest: Vec<f64> = (0..n).map(|i| sq_dist(points.row(i), &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total <= 0.0 {
            // All points coincide with a center already.
            rng.random_range(0..n)
        } else {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = n - 1;
            for (i, d) in nearest.iter().enumerate() {
                acc += d;
                if target < acc {
                    pick = i;
                    break;
                }
            }
            pick
        };
        let c = points.row(next).to_vec();
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(sq_dist(points.row(i), &c));
        }
        centers.push(c);
    }
    centers
}

fn lloyd<R: Rng + ?Sized>(points: &DenseMatrix, k: usize, rng: &mut R) -> KmeansRun {
    let (n, dim) = points.shape();
    let mut centers = seed_centers(points, k, rng);
    let mut labels = vec![usize::MAX; n];

    for _ in 0..KMEANS_MAX_ITER {
        let mut changed = false;
        for (i, label) in labels.iter_mut().enumerate() {
            let row = points.row(i);
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let d = sq_dist(row, center);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            if *label != best {
                *label = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            counts[l] += 1;
            for (s, v) in sums[l].iter_mut().zip(points.row(i)) {
                *s += v;
            }
        }
        for c in 0..k {
            // Empty clusters keep their previous center.
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }

    let inertia = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| sq_dist(points.row(i), &centers[l]))
        .sum();
    KmeansRun { labels, inertia }
}

/// `Σ_A Cut(A)`, summing `w_ij` over ordered pairs with `i ∈ A`, `j ∉ A`.
pub fn cut_value(w: &DenseMatrix, labels: &LabelVector) -> Result<f64> {
    check_square(w)?;
    if labels.len() != w.rows() {
        return Err(Error::Dimension(format!(
            "{} labels for a {}-vertex graph",
            labels.len(),
            w.rows()
        )));
    }
    let l = labels.as_slice();
    let mut total = 0.0;
    for i in 0..w.rows() {
        for (j, &wij) in w.row(i).iter().enumerate() {
            if l[i] != l[j] {
                total += wij;
            }
        }
    }
    Ok(total)
}

/// Total cut divided by the gap `|λ_{r+1} − λ_r|` of the random-walk
/// Laplacian (eigenvalues ascending, 1-indexed). A vanishing gap yields
/// `f64::INFINITY`.
pub fn clustering_cost(w: &DenseMatrix, labels: &LabelVector, r: usize) -> Result<f64> {
    check_square(w)?;
    let n = w.rows();
    if r == 0 || r + 1 > n {
        return Err(Error::Rank(format!(
            "spectral gap at rank {r} needs 1 <= r < n = {n}"
        )));
    }
    let cut = cut_value(w, labels)?;
    let spectrum = random_walk_spectrum(w)?;
    let gap = (spectrum[r] - spectrum[r - 1]).abs();
    if gap < GAP_FLOOR {
        return Ok(f64::INFINITY);
    }
    Ok(cut / gap)
}

#[derive(Clone, Debug)]
pub struct RankCost {
    pub rank: usize,
    pub cost: f64,
    pub labels: LabelVector,
}

/// Costs for every rank guess and the rank with the smallest finite cost.
#[derive(Clone, Debug)]
pub struct CostReport {
    pub per_rank: Vec<RankCost>,
    pub best_rank: usize,
}

impl CostReport {
    /// `None` when every cost is infinite or NaN.
    pub fn from_costs(per_rank: Vec<RankCost>) -> Option<Self> {
        let best_rank = per_rank
            .iter()
            .filter(|c| c.cost.is_finite())
            .min_by(|a, b| a.cost.total_cmp(&b.cost).then(a.rank.cmp(&b.rank)))?
            .rank;
        Some(Self {
            per_rank,
            best_rank,
        })
    }

    pub fn best(&self) -> &RankCost {
        self.per_rank
            .iter()
            .find(|c| c.rank == self.best_rank)
            .expect("best rank is present")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks(sizes: &[usize], weight: f64) -> (DenseMatrix, LabelVector) {
        let labels: Vec<usize> = sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect();
        let n = labels.len();
        let w = DenseMatrix::from_fn(n, n, |i, j| if labels[i] == labels[j] { weight } else { 0.0 });
        (w, LabelVector(labels))
    }

    /// Two blocks {0,1}, {2,3}; intra weight 1, cross weight `c`, zero diagonal.
    fn four_node(c: f64) -> DenseMatrix {
        DenseMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                0.0
            } else if i / 2 == j / 2 {
                1.0
            } else {
                c
            }
        })
    }

    #[test]
    fn random_walk_two_vertex() {
        let w = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let l = laplacian(&w, LaplacianKind::RandomWalk).unwrap();
        assert_eq!(l, DenseMatrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap());
    }

    #[test]
    fn zero_eigenvalue_multiplicity_equals_components() {
        let (w, _) = blocks(&[3, 4, 2], 1.0);
        let spectrum = random_walk_spectrum(&w).unwrap();
        let zeros = spectrum.iter().filter(|l| l.abs() < 1e-8).count();
        assert_eq!(zeros, 3);
    }

    #[test]
    fn symmetric_spectrum_in_unit_interval_times_two() {
        let mut r = rng::from_seed(4);
        let raw = DenseMatrix::from_fn(12, 12, |_, _| r.random::<f64>());
        let w = DenseMatrix::from_fn(12, 12, |i, j| raw[(i, j)] + raw[(j, i)]);
        let l = laplacian(&w, LaplacianKind::Symmetric).unwrap();
        let eig = SymmetricEigen::new(l.to_nalgebra());
        for &v in eig.eigenvalues.iter() {
            assert!((-1e-10..=2.0 + 1e-10).contains(&v), "{v}");
        }
        let rw = laplacian(&w, LaplacianKind::RandomWalk).unwrap();
        for i in 0..12 {
            assert!(rw.row(i).iter().sum::<f64>().abs() < 1e-10);
        }
    }

    #[test]
    fn isolated_vertex_is_clamped() {
        let w = DenseMatrix::zeros(3, 3);
        let l = laplacian(&w, LaplacianKind::RandomWalk).unwrap();
        assert_eq!(l, DenseMatrix::identity(3));
    }

    #[test]
    fn two_blocks_recovered() {
        let (w, truth) = blocks(&[3, 4], 1.0);
        let labels = spectral_clustering(&w, 2, &mut rng::from_seed(0)).unwrap();
        assert!(labels.same_partition(&truth));
    }

    #[test]
    fn three_blocks_recovered() {
        let (w, truth) = blocks(&[5, 5, 5], 1.0);
        let labels = spectral_clustering(&w, 3, &mut rng::from_seed(9)).unwrap();
        assert!(labels.same_partition(&truth));
    }

    #[test]
    fn single_cluster_and_too_many() {
        let (w, _) = blocks(&[3, 3], 1.0);
        let labels = spectral_clustering(&w, 1, &mut rng::from_seed(0)).unwrap();
        assert_eq!(labels.0, vec![0; 6]);
        assert!(spectral_clustering(&w, 7, &mut rng::from_seed(0)).is_err());
    }

    #[test]
    fn cut_values() {
        let (w, truth) = blocks(&[2, 3], 1.0);
        assert_eq!(cut_value(&w, &truth).unwrap(), 0.0);
        let k4 = DenseMatrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 1.0 });
        assert_eq!(cut_value(&k4, &LabelVector(vec![0, 0, 1, 1])).unwrap(), 8.0);
        assert_eq!(cut_value(&k4, &LabelVector(vec![0; 4])).unwrap(), 0.0);
        // Relabeling leaves the cut unchanged.
        assert_eq!(cut_value(&k4, &LabelVector(vec![1, 1, 0, 0])).unwrap(), 8.0);
    }

    #[test]
    fn cost_zero_on_ideal_blocks() {
        let (w, truth) = blocks(&[4, 5, 3], 1.0);
        assert_eq!(clustering_cost(&w, &truth, 3).unwrap(), 0.0);
    }

    #[test]
    fn zero_gap_is_infinite() {
        // K3 has random-walk spectrum {0, 3/2, 3/2}; the gap at r = 2 is zero.
        let k3 = DenseMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 });
        let cost = clustering_cost(&k3, &LabelVector(vec![0, 0, 1]), 2).unwrap();
        assert_eq!(cost, f64::INFINITY);
        assert!(clustering_cost(&k3, &LabelVector(vec![0, 0, 1]), 3).is_err());
    }

    #[test]
    fn four_node_cost_by_hand() {
        // Degrees are all 1 + 2c. Ξ has eigenvalues 1 + 2c, 1 − 2c, −1, −1,
        // so L_rw has 0, 4c/(1+2c), and 1 + 1/(1+2c) twice. At c = 0.1 the
        // gap λ₃ − λ₂ is 11/6 − 1/3 = 3/2 and the cut is 8c = 0.8.
        let w = four_node(0.1);
        let spectrum = random_walk_spectrum(&w).unwrap();
        let expected = [0.0, 1.0 / 3.0, 11.0 / 6.0, 11.0 / 6.0];
        for (a, b) in spectrum.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{spectrum:?}");
        }
        let cost = clustering_cost(&w, &LabelVector(vec![0, 0, 1, 1]), 2).unwrap();
        assert!((cost - 8.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn four_node_cost_decreases_with_cross_weight() {
        let labels = LabelVector(vec![0, 0, 1, 1]);
        let costs: Vec<f64> = [0.2, 0.1, 0.05, 0.0]
            .iter()
            .map(|&c| clustering_cost(&four_node(c), &labels, 2).unwrap())
            .collect();
        assert!(costs.windows(2).all(|p| p[0] > p[1]), "{costs:?}");
        assert_eq!(costs[3], 0.0);
    }

    #[test]
    fn cost_report_picks_min_finite() {
        let mk = |rank, cost| RankCost {
            rank,
            cost,
            labels: LabelVector(vec![]),
        };
        let report =
            CostReport::from_costs(vec![mk(2, f64::INFINITY), mk(3, 0.5), mk(4, 0.2)]).unwrap();
        assert_eq!(report.best_rank, 4);
        assert!(CostReport::from_costs(vec![mk(2, f64::INFINITY)]).is_none());
    }

    #[test]
    fn contiguous_relabel() {
        assert_eq!(LabelVector::contiguous(&[5, 5, 9]).0, vec![0, 0, 1]);
        assert!(LabelVector(vec![1, 1, 0]).same_partition(&LabelVector(vec![0, 0, 1])));
        assert!(!LabelVector(vec![1, 0, 0]).same_partition(&LabelVector(vec![0, 0, 1])));
    }
}
