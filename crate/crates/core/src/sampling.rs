//! Row and column selection for CUR decompositions.
//!
//! Three random distributions (uniform, squared length, rank-`k` leverage
//! scores) and the deterministic DEIM selector.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, svd_thin, DenseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SamplingMethod {
    Uniform,
    Length,
    Leverage,
    Deim,
}

impl SamplingMethod {
    pub const ALL: [SamplingMethod; 4] = [
        SamplingMethod::Uniform,
        SamplingMethod::Length,
        SamplingMethod::Leverage,
        SamplingMethod::Deim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplingMethod::Uniform => "uniform",
            SamplingMethod::Length => "length",
            SamplingMethod::Leverage => "leverage",
            SamplingMethod::Deim => "deim",
        }
    }

    pub fn is_random(self) -> bool {
        self != SamplingMethod::Deim
    }
}

impl fmt::Display for SamplingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" | "u" | "unif" => Ok(SamplingMethod::Uniform),
            "length" | "len" => Ok(SamplingMethod::Length),
            "leverage" | "lev" => Ok(SamplingMethod::Leverage),
            "deim" => Ok(SamplingMethod::Deim),
            other => Err(Error::Config(format!("unknown sampling method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Rows,
    Cols,
}

impl Axis {
    fn len(self, x: &DenseMatrix) -> usize {
        match self {
            Axis::Rows => x.rows(),
            Axis::Cols => x.cols(),
        }
    }
}

/// How to pick indices along one axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingSpec {
    pub method: SamplingMethod,
    pub axis: Axis,
    /// Truncation rank for leverage scores and DEIM.
    pub rank_hint: usize,
    pub replacement: bool,
}

impl SamplingSpec {
    pub fn new(method: SamplingMethod, axis: Axis) -> Self {
        Self {
            method,
            axis,
            rank_hint: 1,
            replacement: false,
        }
    }

    pub fn with_rank(mut self, k: usize) -> Self {
        self.rank_hint = k;
        self
    }

    pub fn with_replacement(mut self, replacement: bool) -> Self {
        self.replacement = replacement;
        self
    }
}

/// Probability vector over the indices of one axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    pub probs: Vec<f64>,
}

impl Distribution {
    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::DegenerateDistribution(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::DegenerateDistribution("all weights are zero".into()));
        }
        Ok(Self {
            probs: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }
}

pub fn build_distribution(x: &DenseMatrix, spec: &SamplingSpec) -> Result<Distribution> {
    if x.is_empty() {
        return Err(Error::Dimension("cannot sample from an empty matrix".into()));
    }
    let len = spec.axis.len(x);
    match spec.method {
        SamplingMethod::Uniform => Ok(Distribution::uniform(len)),
        SamplingMethod::Length => {
            let weights = match spec.axis {
                Axis::Rows => (0..x.rows())
                    .map(|i| x.row(i).iter().map(|v| v * v).sum())
                    .collect(),
                Axis::Cols => {
                    let mut w = vec![0.0; x.cols()];
                    for i in 0..x.rows() {
                        for (acc, v) in w.iter_mut().zip(x.row(i)) {
                            *acc += v * v;
                        }
                    }
                    w
                }
            };
            Distribution::from_weights(weights).map_err(|_| {
                Error::DegenerateDistribution("length distribution of a zero matrix".into())
            })
        }
        SamplingMethod::Leverage => {
            let k = spec.rank_hint;
            let max_k = x.rows().min(x.cols());
            if k == 0 || k > max_k {
                return Err(Error::Rank(format!(
                    "leverage rank {k} must lie in 1..={max_k}"
                )));
            }
            let block = singular_block(x, k, spec.axis)?;
            // Rows of an orthonormal block have squared norms summing to k.
            let probs = (0..block.rows())
                .map(|i| block.row(i).iter().map(|v| v * v).sum::<f64>() / k as f64)
                .collect();
            Ok(Distribution { probs })
        }
        SamplingMethod::Deim => Err(Error::Unsupported(
            "DEIM is deterministic and has no sampling distribution".into(),
        )),
    }
}

/// Leading `k` singular vectors for the given axis: left for rows,
/// right for columns.
fn singular_block(x: &DenseMatrix, k: usize, axis: Axis) -> Result<DenseMatrix> {
    let svd = svd_thin(x)?.truncate(k);
    Ok(match axis {
        Axis::Rows => svd.left,
        Axis::Cols => svd.right,
    })
}

/// Draws `count` indices from `dist`.
///
/// Without replacement the draws are sequential and renormalized over the
/// remaining mass, producing distinct indices. With replacement the draws
/// are i.i.d. and duplicates are dropped (first occurrence kept), so the
/// result may be shorter than `count`.
pub fn draw_indices<R: Rng + ?Sized>(
    dist: &Distribution,
    count: usize,
    replacement: bool,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if count == 0 {
        return Err(Error::Sampling("must draw at least one index".into()));
    }
    if replacement {
        let draws = draw_with_replacement(&dist.probs, count, rng);
        let mut seen = vec![false; dist.len()];
        Ok(draws
            .into_iter()
            .filter(|&i| !std::mem::replace(&mut seen[i], true))
            .collect())
    } else {
        let support = dist.support_size();
        if count > support {
            return Err(Error::Sampling(format!(
                "cannot draw {count} distinct indices from a support of size {support}"
            )));
        }
        Ok(draw_without_replacement(&dist.probs, count, rng))
    }
}

fn pick<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last_positive = i;
        if target < acc {
            return i;
        }
    }
    // Rounding can leave `target` just past the final partial sum.
    last_positive
}

fn draw_with_replacement<R: Rng + ?Sized>(probs: &[f64], count: usize, rng: &mut R) -> Vec<usize> {
    let total: f64 = probs.iter().sum();
    (0..count).map(|_| pick(probs, total, rng)).collect()
}

fn draw_without_replacement<R: Rng + ?Sized>(
    probs: &[f64],
    count: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut weights = probs.to_vec();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let total: f64 = weights.iter().sum();
        let i = pick(&weights, total, rng);
        out.push(i);
        weights[i] = 0.0;
    }
    out
}

/// Index of the largest absolute entry; ties go to the lowest index.
fn argmax_abs(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        if v.abs() > best_val {
            best = i;
            best_val = v.abs();
        }
    }
    best
}

/// DEIM selection of `k` indices from the leading `k` singular vectors of
/// `x` along `axis`.
pub fn deim_select(x: &DenseMatrix, k: usize, axis: Axis) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::Rank("DEIM needs k >= 1".into()));
    }
    let svd = svd_thin(x)?;
    let rank = numerical_rank(&svd.singulars, x.rows(), x.cols());
    if k > rank {
        return Err(Error::Rank(format!(
            "DEIM rank {k} exceeds the numerical rank {rank}"
        )));
    }
    let block = match axis {
        Axis::Rows => svd.left,
        Axis::Cols => svd.right,
    };
    deim_indices(&block, k)
}

/// DEIM recursion over the first `k` columns of `vectors`.
///
/// The first index maximizes `|v₁|`. Each later vector is interpolated at
/// the chosen indices, the interpolant is subtracted, and the next index
/// maximizes the absolute residual.
pub fn deim_indices(vectors: &DenseMatrix, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > vectors.cols() || k > vectors.rows() {
        return Err(Error::Rank(format!(
            "cannot select {k} DEIM indices from a {}x{} block",
            vectors.rows(),
            vectors.cols()
        )));
    }
    let n = vectors.rows();
    let mut chosen = vec![argmax_abs(vectors.column(0))];
    for step in 1..k {
        let basis: Vec<usize> = (0..step).collect();
        // Solve V(p, :step) c = v(p) for the interpolation coefficients.
        let system = DMatrix::from_fn(step, step, |a, b| vectors[(chosen[a], basis[b])]);
        let rhs = nalgebra::DVector::from_fn(step, |a, _| vectors[(chosen[a], step)]);
        let coeffs = system.lu().solve(&rhs).ok_or_else(|| {
            Error::Rank(format!("DEIM interpolation system is singular at step {step}"))
        })?;
        let residual = (0..n).map(|i| {
            let interp: f64 = (0..step).map(|b| vectors[(i, b)] * coeffs[b]).sum();
            vectors[(i, step)] - interp
        });
        let next = argmax_abs(residual);
        if chosen.contains(&next) {
            return Err(Error::Rank(format!(
                "DEIM residual vanished at step {step}"
            )));
        }
        chosen.push(next);
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn uniform_distribution() {
        let x = DenseMatrix::zeros(3, 4);
        let d = build_distribution(&x, &SamplingSpec::new(SamplingMethod::Uniform, Axis::Cols))
            .unwrap();
        assert_eq!(d.probs, vec![0.25; 4]);
    }

    #[test]
    fn length_distribution_columns() {
        let x = m(&[&[1.0, 2.0], &[0.0, 2.0]]);
        let d =
            build_distribution(&x, &SamplingSpec::new(SamplingMethod::Length, Axis::Cols)).unwrap();
        assert!((d.probs[0] - 1.0 / 9.0).abs() < 1e-15);
        assert!((d.probs[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn length_distribution_rows() {
        let x = m(&[&[1.0, 2.0], &[0.0, 2.0]]);
        let d =
            build_distribution(&x, &SamplingSpec::new(SamplingMethod::Length, Axis::Rows)).unwrap();
        assert!((d.probs[0] - 5.0 / 9.0).abs() < 1e-15);
        assert!((d.probs[1] - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn leverage_rank_one_example() {
        let x = m(&[&[1.0, 1.0], &[2.0, 2.0]]);
        let spec = SamplingSpec::new(SamplingMethod::Leverage, Axis::Cols).with_rank(1);
        let d = build_distribution(&x, &spec).unwrap();
        assert!((d.probs[0] - 0.5).abs() < 1e-15);
        assert!((d.probs[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_unsupported() {
        let z = DenseMatrix::zeros(2, 2);
        assert!(matches!(
            build_distribution(&z, &SamplingSpec::new(SamplingMethod::Length, Axis::Cols)),
            Err(Error::DegenerateDistribution(_))
        ));
        assert!(matches!(
            build_distribution(&z, &SamplingSpec::new(SamplingMethod::Deim, Axis::Cols)),
            Err(Error::Unsupported(_))
        ));
        let spec = SamplingSpec::new(SamplingMethod::Leverage, Axis::Cols).with_rank(3);
        assert!(matches!(
            build_distribution(&DenseMatrix::identity(2), &spec),
            Err(Error::Rank(_))
        ));
    }

    #[test]
    fn point_mass_draw() {
        let d = Distribution {
            probs: vec![1.0, 0.0, 0.0],
        };
        let mut r = rng::from_seed(0);
        assert_eq!(draw_indices(&d, 1, false, &mut r).unwrap(), vec![0]);
        assert_eq!(draw_indices(&d, 4, true, &mut r).unwrap(), vec![0]);
        assert!(matches!(
            draw_indices(&d, 2, false, &mut r),
            Err(Error::Sampling(_))
        ));
    }

    #[test]
    fn exhausting_support_is_a_permutation() {
        let mut r = rng::from_seed(1);
        let mut idx = draw_indices(&Distribution::uniform(5), 5, false, &mut r).unwrap();
        idx.sort_unstable();
        assert_eq!(idx, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn draws_are_deterministic_under_seed() {
        let d = Distribution::uniform(100);
        let a = draw_indices(&d, 10, false, &mut rng::from_seed(7)).unwrap();
        let b = draw_indices(&d, 10, false, &mut rng::from_seed(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn deim_canonical_vectors() {
        assert_eq!(deim_indices(&DenseMatrix::identity(3), 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn deim_argmax_first_step() {
        let v = m(&[&[0.1], &[0.9], &[0.3]]);
        assert_eq!(deim_indices(&v, 1).unwrap(), vec![1]);
    }

    #[test]
    fn deim_two_by_two_recursion() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = m(&[&[s, s], &[s, -s]]);
        assert_eq!(deim_indices(&v, 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn deim_rank_error() {
        let x = m(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(deim_select(&x, 2, Axis::Cols), Err(Error::Rank(_))));
        assert_eq!(deim_select(&x, 1, Axis::Cols).unwrap(), vec![1]);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("lev".parse::<SamplingMethod>().unwrap(), SamplingMethod::Leverage);
        assert_eq!("DEIM".parse::<SamplingMethod>().unwrap(), SamplingMethod::Deim);
        assert!("volume".parse::<SamplingMethod>().is_err());
    }
}
