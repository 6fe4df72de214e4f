//! Similarity matrices for subspace clustering: the shape interaction
//! matrix, single CUR trials, and the robust median-aggregated RCUR driver.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{matrix_rank, pseudoinverse, svd_thin, validate_indices, DenseMatrix};
use crate::rng::{self, Stream, TAG_SPECTRAL, TAG_TRIAL};
use crate::sampling::{
    build_distribution, deim_select, draw_indices, Axis, Distribution, SamplingMethod,
    SamplingSpec,
};
use crate::spectral::{clustering_cost, spectral_clustering, CostReport, LabelVector, RankCost};

/// Redraws allowed when a trial's intersection matrix has rank zero.
const MAX_REDRAWS: usize = 10;

/// Square n×n similarity between data columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix(pub DenseMatrix);

impl SimilarityMatrix {
    pub fn into_inner(self) -> DenseMatrix {
        self.0
    }
}

impl Deref for SimilarityMatrix {
    type Target = DenseMatrix;

    fn deref(&self) -> &DenseMatrix {
        &self.0
    }
}

/// Column oversampling factor: `min(n, ⌈κ·r⌉)` columns, or every column.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kappa {
    Factor(f64),
    All,
}

impl Kappa {
    pub fn column_count(self, r: usize, n: usize) -> usize {
        match self {
            Kappa::All => n,
            Kappa::Factor(k) => ((k * r as f64).ceil() as usize).clamp(1, n),
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::All => f.write_str("inf"),
            Kappa::Factor(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for Kappa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity" | "all" | "∞") {
            return Ok(Kappa::All);
        }
        match s.parse::<f64>() {
            Ok(k) if k.is_infinite() && k > 0.0 => Ok(Kappa::All),
            Ok(k) if k.is_finite() && k > 0.0 => Ok(Kappa::Factor(k)),
            _ => Err(Error::Config(format!(
                "kappa must be a positive number or \"inf\", got {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RcurConfig {
    pub r_min: usize,
    pub r_max: usize,
    pub kappa: Kappa,
    pub trials: usize,
    /// Soft-threshold exponent applied entrywise after aggregation.
    pub tau: f64,
    /// Matrix power applied to the thresholded similarity.
    pub power: u32,
    pub clusters: usize,
    pub row_sampling: SamplingMethod,
    pub col_sampling: SamplingMethod,
    pub replacement: bool,
    pub seed: u64,
}

impl RcurConfig {
    /// Defaults: uniform sampling without replacement, all columns, 30
    /// trials, τ = 2, no matrix power.
    pub fn new(clusters: usize, r_min: usize, r_max: usize) -> Self {
        Self {
            r_min,
            r_max,
            kappa: Kappa::All,
            trials: 30,
            tau: 2.0,
            power: 1,
            clusters,
            row_sampling: SamplingMethod::Uniform,
            col_sampling: SamplingMethod::Uniform,
            replacement: false,
            seed: 0,
        }
    }

    pub fn with_sampling(mut self, method: SamplingMethod) -> Self {
        self.row_sampling = method;
        self.col_sampling = method;
        self
    }

    pub fn with_kappa(mut self, kappa: Kappa) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.r_min == 0 || self.r_min > self.r_max {
            return fail(format!(
                "rank range {}..={} must satisfy 1 <= r_min <= r_max",
                self.r_min, self.r_max
            ));
        }
        if self.r_max > m {
            return fail(format!(
                "r_max = {} exceeds the {m} available rows",
                self.r_max
            ));
        }
        if self.r_max >= n {
            return fail(format!(
                "r_max = {} leaves no spectral gap among {n} columns",
                self.r_max
            ));
        }
        if self.clusters == 0 || self.clusters > n {
            return fail(format!(
                "cannot form {} clusters from {n} columns",
                self.clusters
            ));
        }
        if self.trials == 0 {
            return fail("at least one trial is required".into());
        }
        if !(self.tau >= 1.0 && self.tau.is_finite()) {
            return fail(format!("tau must be finite and >= 1, got {}", self.tau));
        }
        if self.power == 0 {
            return fail("matrix power must be >= 1".into());
        }
        if let Kappa::Factor(k) = self.kappa {
            if !(k > 0.0 && k.is_finite()) {
                return fail(format!("kappa must be positive, got {k}"));
            }
        }
        Ok(())
    }
}

/// Result of [`rcur`]: labels and similarity at the selected rank plus
/// the cost of every rank guess.
#[derive(Clone, Debug)]
pub struct ClusteringOutcome {
    pub labels: LabelVector,
    pub best_rank: usize,
    pub costs: CostReport,
    pub similarity: SimilarityMatrix,
}

/// `abs(V_r V_rᵀ)` raised to the matrix power `p`.
pub fn shape_interaction(x: &DenseMatrix, r: usize, p: u32) -> Result<SimilarityMatrix> {
    let max_r = x.rows().min(x.cols());
    if r == 0 || r > max_r {
        return Err(Error::Rank(format!("rank {r} must lie in 1..={max_r}")));
    }
    if p == 0 {
        return Err(Error::Config("matrix power must be >= 1".into()));
    }
    let v = svd_thin(x)?.truncate(r).right;
    let s = v.matmul(&v.transpose()).abs();
    Ok(SimilarityMatrix(if p == 1 { s } else { s.pow(p) }))
}

/// `Y = D(I,J)† D(I,:)`.
fn cur_coefficients(d: &DenseMatrix, rows: &[usize], cols: &[usize]) -> Result<DenseMatrix> {
    validate_indices(rows, d.rows(), "row")?;
    validate_indices(cols, d.cols(), "column")?;
    let u = d.submatrix(rows, cols);
    let r = d.select_rows(rows);
    Ok(pseudoinverse(&u, None)?.matmul(&r))
}

/// One CUR trial: `Y = D(I,J)† D(I,:)` with unit-norm columns (zero
/// columns stay zero), returning `YᵀY`.
pub fn trial_similarity(d: &DenseMatrix, rows: &[usize], cols: &[usize]) -> Result<SimilarityMatrix> {
    let mut y = cur_coefficients(d, rows, cols)?;
    let (k, n) = y.shape();
    for j in 0..n {
        let norm = (0..k).map(|i| y[(i, j)] * y[(i, j)]).sum::<f64>().sqrt();
        if norm > 0.0 {
            for i in 0..k {
                y[(i, j)] /= norm;
            }
        }
    }
    Ok(SimilarityMatrix(y.transpose_matmul(&y)))
}

/// Unnormalized CUR clustering matrix `abs((U†R)ᵀ U†R)` raised to the
/// matrix power `p`.
pub fn cur_clustering_matrix(
    d: &DenseMatrix,
    rows: &[usize],
    cols: &[usize],
    p: u32,
) -> Result<SimilarityMatrix> {
    if p == 0 {
        return Err(Error::Config("matrix power must be >= 1".into()));
    }
    let y = cur_coefficients(d, rows, cols)?;
    let s = y.transpose_matmul(&y).abs();
    Ok(SimilarityMatrix(if p == 1 { s } else { s.pow(p) }))
}

fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (_, &mut upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    if n % 2 == 1 {
        upper
    } else {
        let lower = values[..mid]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

/// Entrywise median across trials, then absolute value, then the entrywise
/// power `tau`.
pub fn aggregate_and_threshold(trials: &[SimilarityMatrix], tau: f64) -> Result<SimilarityMatrix> {
    let first = trials
        .first()
        .ok_or_else(|| Error::Dimension("no trials to aggregate".into()))?;
    let shape = first.shape();
    if let Some(bad) = trials.iter().find(|t| t.shape() != shape) {
        return Err(Error::Dimension(format!(
            "trial shape {:?} differs from {:?}",
            bad.shape(),
            shape
        )));
    }
    let mut column = vec![0.0; trials.len()];
    let out = DenseMatrix::from_fn(shape.0, shape.1, |i, j| {
        for (slot, t) in column.iter_mut().zip(trials) {
            *slot = t[(i, j)];
        }
        let v = median_in_place(&mut column).abs();
        if tau == 1.0 {
            v
        } else {
            v.powf(tau)
        }
    });
    Ok(SimilarityMatrix(out))
}

enum AxisSampler {
    All(usize),
    Fixed(Vec<usize>),
    Random {
        dist: Distribution,
        count: usize,
        replacement: bool,
    },
}

impl AxisSampler {
    fn build(
        d: &DenseMatrix,
        method: SamplingMethod,
        axis: Axis,
        count: usize,
        r: usize,
        data_rank: usize,
        replacement: bool,
    ) -> Result<Self> {
        let len = match axis {
            Axis::Rows => d.rows(),
            Axis::Cols => d.cols(),
        };
        if count >= len && !replacement {
            return Ok(AxisSampler::All(len));
        }
        if method == SamplingMethod::Deim {
            // DEIM can only place as many indices as there are singular vectors.
            let k = count.min(data_rank);
            if k == 0 {
                return Err(Error::Rank("DEIM on a zero matrix".into()));
            }
            return Ok(AxisSampler::Fixed(deim_select(d, k, axis)?));
        }
        let spec = SamplingSpec::new(method, axis)
            .with_rank(r)
            .with_replacement(replacement);
        let dist = build_distribution(d, &spec)?;
        let count = if replacement {
            count
        } else {
            count.min(dist.support_size())
        };
        Ok(AxisSampler::Random {
            dist,
            count,
            replacement,
        })
    }

    fn draw(&self, rng: &mut Stream) -> Result<Vec<usize>> {
        match self {
            AxisSampler::All(len) => Ok((0..*len).collect()),
            AxisSampler::Fixed(idx) => Ok(idx.clone()),
            AxisSampler::Random {
                dist,
                count,
                replacement,
            } => draw_indices(dist, *count, *replacement, rng),
        }
    }

    fn is_random(&self) -> bool {
        matches!(self, AxisSampler::Random { .. })
    }
}

/// Row and column index sampler for one rank guess `r`: `r` rows and
/// `min(n, ⌈κr⌉)` columns.
pub struct RankSampler {
    rank: usize,
    rows: AxisSampler,
    cols: AxisSampler,
}

impl RankSampler {
    pub fn new(d: &DenseMatrix, cfg: &RcurConfig, r: usize) -> Result<Self> {
        let data_rank = if cfg.row_sampling == SamplingMethod::Deim
            || cfg.col_sampling == SamplingMethod::Deim
        {
            matrix_rank(d)?
        } else {
            d.rows().min(d.cols())
        };
        let col_count = cfg.kappa.column_count(r, d.cols());
        let cols = if cfg.kappa == Kappa::All {
            AxisSampler::All(d.cols())
        } else {
            AxisSampler::build(
                d,
                cfg.col_sampling,
                Axis::Cols,
                col_count,
                r,
                data_rank,
                cfg.replacement,
            )?
        };
        let rows = AxisSampler::build(
            d,
            cfg.row_sampling,
            Axis::Rows,
            r,
            r,
            data_rank,
            cfg.replacement,
        )?;
        Ok(Self { rank: r, rows, cols })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// False when every draw returns the same index sets.
    pub fn is_random(&self) -> bool {
        self.rows.is_random() || self.cols.is_random()
    }

    pub fn draw(&self, rng: &mut Stream) -> Result<(Vec<usize>, Vec<usize>)> {
        Ok((self.rows.draw(rng)?, self.cols.draw(rng)?))
    }
}

/// Index sets used by trial `trial` at rank `r`, as [`rcur`] draws them
/// (first attempt).
pub fn trial_indices(
    d: &DenseMatrix,
    cfg: &RcurConfig,
    r: usize,
    trial: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let sampler = RankSampler::new(d, cfg, r)?;
    sampler.draw(&mut trial_stream(cfg.seed, r, trial))
}

fn trial_stream(seed: u64, r: usize, trial: usize) -> Stream {
    rng::stream(seed, &[TAG_TRIAL, r as u64, trial as u64])
}

fn run_trial(d: &DenseMatrix, sampler: &RankSampler, seed: u64, trial: usize) -> Result<SimilarityMatrix> {
    let mut stream = trial_stream(seed, sampler.rank(), trial);
    for _ in 0..=MAX_REDRAWS {
        let (rows, cols) = sampler.draw(&mut stream)?;
        let u = d.submatrix(&rows, &cols);
        if matrix_rank(&u)? > 0 {
            return trial_similarity(d, &rows, &cols);
        }
        if !sampler.is_random() {
            break;
        }
    }
    Ok(SimilarityMatrix(DenseMatrix::zeros(d.cols(), d.cols())))
}

/// Aggregated, thresholded similarity for a single rank guess.
pub fn rank_similarity(d: &DenseMatrix, cfg: &RcurConfig, r: usize) -> Result<SimilarityMatrix> {
    let sampler = RankSampler::new(d, cfg, r)?;
    // Deterministic selectors give identical trials; one suffices.
    let trials = if sampler.is_random() { cfg.trials } else { 1 };
    let sims = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(d, &sampler, cfg.seed, t))
        .collect::<Result<Vec<_>>>()?;
    let thresholded = aggregate_and_threshold(&sims, cfg.tau)?;
    Ok(if cfg.power > 1 {
        SimilarityMatrix(thresholded.pow(cfg.power))
    } else {
        thresholded
    })
}

/// Robust CUR similarity clustering.
///
/// For every rank guess `r` in `r_min..=r_max`, aggregates `trials` CUR
/// similarity matrices by entrywise median, soft-thresholds them, clusters
/// the result spectrally, and scores the clustering by cut over spectral
/// gap. The rank with the smallest finite cost wins.
pub fn rcur(d: &DenseMatrix, cfg: &RcurConfig) -> Result<ClusteringOutcome> {
    cfg.validate(d.rows(), d.cols())?;
    let mut per_rank = Vec::with_capacity(cfg.r_max - cfg.r_min + 1);
    let mut similarities = Vec::with_capacity(per_rank.capacity());
    for r in cfg.r_min..=cfg.r_max {
        let sim = rank_similarity(d, cfg, r)?;
        let mut stream = rng::stream(cfg.seed, &[TAG_SPECTRAL, r as u64]);
        let labels = spectral_clustering(&sim, cfg.clusters, &mut stream)?;
        let cost = clustering_cost(&sim, &labels, r)?;
        per_rank.push(RankCost {
            rank: r,
            cost,
            labels,
        });
        similarities.push(sim);
    }
    let costs = CostReport::from_costs(per_rank).ok_or(Error::DegenerateCost {
        r_min: cfg.r_min,
        r_max: cfg.r_max,
    })?;
    let best = costs.best_rank;
    let labels = costs.best().labels.clone();
    let similarity = similarities.swap_remove(best - cfg.r_min);
    Ok(ClusteringOutcome {
        labels,
        best_rank: best,
        costs,
        similarity,
    })
}
