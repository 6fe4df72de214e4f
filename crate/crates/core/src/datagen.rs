//! Synthetic union-of-subspaces data and incoherence diagnostics.

use rand::Rng;
use rand_distr::{Distribution as _, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{svd_thin, DenseMatrix};
use crate::spectral::LabelVector;

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticConfig {
    pub ambient_dim: usize,
    pub subspace_dims: Vec<usize>,
    pub points_per_subspace: Vec<usize>,
    /// Standard deviation of the additive Gaussian noise.
    pub noise_sigma: f64,
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.ambient_dim == 0 {
            return fail("ambient dimension must be positive".into());
        }
        if self.subspace_dims.is_empty() {
            return fail("at least one subspace is required".into());
        }
        if self.subspace_dims.len() != self.points_per_subspace.len() {
            return fail(format!(
                "{} subspace dimensions but {} point counts",
                self.subspace_dims.len(),
                self.points_per_subspace.len()
            ));
        }
        for (i, (&d, &p)) in self
            .subspace_dims
            .iter()
            .zip(&self.points_per_subspace)
            .enumerate()
        {
            if d == 0 || d > self.ambient_dim {
                return fail(format!(
                    "subspace {i} has dimension {d}, outside 1..={}",
                    self.ambient_dim
                ));
            }
            if p < d {
                return fail(format!(
                    "subspace {i} needs at least {d} points, got {p}"
                ));
            }
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return fail(format!("noise sigma must be >= 0, got {}", self.noise_sigma));
        }
        Ok(())
    }
}

/// Data with ground-truth labels. Columns are points.
#[derive(Clone, Debug)]
pub struct LabeledDataset {
    pub data: DenseMatrix,
    pub labels: LabelVector,
    /// Orthonormal basis (ambient × d_i) of each generating subspace.
    pub bases: Vec<DenseMatrix>,
}

/// Orthonormal basis of a random `d`-dimensional subspace of ℝⁿ.
pub fn random_basis<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> DenseMatrix {
    loop {
        let g = nalgebra::DMatrix::from_fn(n, d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = g.qr();
        // Gaussian matrices are full rank almost surely; retry the null event.
        if qr.r().diagonal().iter().all(|v| v.abs() > 1e-10) {
            return DenseMatrix::from_nalgebra(&qr.q());
        }
    }
}

/// Point drawn uniformly from the unit ball of ℝᵈ.
fn unit_ball_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            let radius = rng.random::<f64>().powf(1.0 / d as f64);
            return g.into_iter().map(|v| v * radius / norm).collect();
        }
    }
}

/// Draws points from a union of random linear subspaces, grouped by
/// subspace, plus i.i.d. Gaussian noise.
pub fn generate_union<R: Rng + ?Sized>(cfg: &SyntheticConfig, rng: &mut R) -> Result<LabeledDataset> {
    cfg.validate()?;
    let n = cfg.ambient_dim;
    let total: usize = cfg.points_per_subspace.iter().sum();
    let mut columns = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    let mut bases = Vec::with_capacity(cfg.subspace_dims.len());

    for (s, (&d, &count)) in cfg
        .subspace_dims
        .iter()
        .zip(&cfg.points_per_subspace)
        .enumerate()
    {
        let basis = random_basis(n, d, rng);
        for _ in 0..count {
            let coeffs = unit_ball_point(d, rng);
            let point: Vec<f64> = (0..n)
                .map(|i| basis.row(i).iter().zip(&coeffs).map(|(b, c)| b * c).sum())
                .collect();
            columns.push(point);
            labels.push(s);
        }
        bases.push(basis);
    }

    if cfg.noise_sigma > 0.0 {
        let noise = Normal::new(0.0, cfg.noise_sigma).expect("sigma validated");
        for col in &mut columns {
            for v in col.iter_mut() {
                *v += noise.sample(rng);
            }
        }
    }

    Ok(LabeledDataset {
        data: DenseMatrix::from_columns(&columns)?,
        labels: LabelVector(labels),
        bases,
    })
}

/// Row/column incoherence `(μ₁, μ₂)` of the rank-`k` singular subspaces:
/// `μ₁ = √(m/k)·maxᵢ ‖U_k(i,:)‖`, `μ₂ = √(n/k)·maxⱼ ‖V_k(j,:)‖`.
pub fn incoherence(x: &DenseMatrix, k: usize) -> Result<(f64, f64)> {
    let (m, n) = x.shape();
    if k == 0 || k > m.min(n) {
        return Err(Error::Rank(format!(
            "incoherence rank {k} must lie in 1..={}",
            m.min(n)
        )));
    }
    let svd = svd_thin(x)?.truncate(k);
    let max_row_norm = |b: &DenseMatrix| {
        (0..b.rows())
            .map(|i| b.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    };
    let mu1 = (m as f64 / k as f64).sqrt() * max_row_norm(&svd.left);
    let mu2 = (n as f64 / k as f64).sqrt() * max_row_norm(&svd.right);
    Ok((mu1, mu2))
}
