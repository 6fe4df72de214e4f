//! Dense linear algebra: a row-major matrix type, compact SVD, numerical
//! rank, the Moore-Penrose pseudoinverse and CUR factor assembly.
//!
//! Factorizations are delegated to `nalgebra`; everything here is a pure
//! function of its inputs.

use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Real dense matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major entries, rejecting a length mismatch
    /// or any non-finite value.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from a slice of equally sized rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Stacks column vectors side by side.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().position(|c| c.len() != rows) {
            return Err(Error::Dimension(format!(
                "column {bad} has {} entries, expected {rows}",
                columns[bad].len()
            )));
        }
        let m = Self::from_fn(rows, columns.len(), |i, j| columns[j][i]);
        Self::new(m.rows, m.cols, m.data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix product; panics on inner-dimension mismatch.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `selfᵀ · rhs` without materializing the transpose.
    pub fn transpose_matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "transpose_matmul: row mismatch");
        let mut out = Self::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            let rrow = rhs.row(k);
            for (i, &a) in self.row(k).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Square matrix raised to a positive integer power by repeated squaring.
    pub fn pow(&self, p: u32) -> Self {
        assert_eq!(self.rows, self.cols, "pow: matrix must be square");
        assert!(p >= 1, "pow: exponent must be positive");
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = p;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.matmul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.matmul(&base);
        }
        result.expect("p >= 1")
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "sub: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Rows `rows` in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Columns `cols` in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Singular triplets sorted by decreasing singular value.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    /// m×k, orthonormal columns.
    pub left: DenseMatrix,
    pub singulars: Vec<f64>,
    /// n×k, orthonormal columns.
    pub right: DenseMatrix,
}

impl SvdFactors {
    pub fn len(&self) -> usize {
        self.singulars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singulars.is_empty()
    }

    /// `left · diag(singulars) · rightᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let scaled = DenseMatrix::from_fn(self.left.rows(), self.len(), |i, k| {
            self.left[(i, k)] * self.singulars[k]
        });
        scaled.matmul(&self.right.transpose())
    }

    /// Keeps the leading `k` triplets.
    pub fn truncate(&self, k: usize) -> Self {
        let k = k.min(self.len());
        let idx: Vec<usize> = (0..k).collect();
        Self {
            left: self.left.select_cols(&idx),
            singulars: self.singulars[..k].to_vec(),
            right: self.right.select_cols(&idx),
        }
    }
}

/// Thin SVD with all `min(m, n)` triplets, sorted descending.
pub fn svd_thin(x: &DenseMatrix) -> Result<SvdFactors> {
    if x.is_empty() {
        return Err(Error::Dimension(format!(
            "cannot factor an empty {}x{} matrix",
            x.rows(),
            x.cols()
        )));
    }
    if x.rows() >= x.cols() {
        Ok(jacobi_svd(x))
    } else {
        let t = jacobi_svd(&x.transpose());
        Ok(SvdFactors {
            left: t.right,
            singulars: t.singulars,
            right: t.left,
        })
    }
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD of a tall matrix (`rows >= cols`).
///
/// Columns are rotated pairwise until mutually orthogonal to working
/// precision; their norms are the singular values. Unlike bidiagonal QR
/// this stays accurate on exactly rank-deficient input, which is the common
/// case for CUR intersection matrices.
fn jacobi_svd(x: &DenseMatrix) -> SvdFactors {
    let (m, n) = x.shape();
    debug_assert!(m >= n);
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| x.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&a[p], &a[p]);
                let beta = dot(&a[q], &a[q]);
                let gamma = dot(&a[p], &a[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = (1.0 + t * t).sqrt().recip();
                let s = c * t;
                let (lo, hi) = a.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
                let (lo, hi) = v.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = a.iter().map(|col| dot(col, col).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| norms[q].total_cmp(&norms[p]).then(p.cmp(&q)));

    let singulars: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    // Columns whose norm is at rounding level carry no direction; they are
    // replaced by an orthonormal completion.
    let floor = m as f64 * f64::EPSILON * singulars[0];
    let mut left: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (rank_pos, &k) in order.iter().enumerate() {
        let candidate = if singulars[rank_pos] > floor && singulars[rank_pos] > 0.0 {
            Some(a[k].iter().map(|v| v / norms[k]).collect::<Vec<_>>())
        } else {
            None
        };
        left.push(orthonormal_completion(&left, candidate, m));
    }

    SvdFactors {
        left: DenseMatrix::from_fn(m, n, |i, k| left[k][i]),
        singulars,
        right: DenseMatrix::from_fn(n, n, |i, k| v[order[k]][i]),
    }
}

fn rotate(p: &mut [f64], q: &mut [f64], c: f64, s: f64) {
    for (x, y) in p.iter_mut().zip(q.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Unit vector orthogonal to `basis`: `candidate` when it already is
/// (up to reorthogonalization), otherwise the first suitable standard
/// basis vector.
fn orthonormal_completion(basis: &[Vec<f64>], candidate: Option<Vec<f64>>, m: usize) -> Vec<f64> {
    let project_out = |mut w: Vec<f64>| {
        for _ in 0..2 {
            for b in basis {
                let c: f64 = b.iter().zip(&w).map(|(x, y)| x * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        (w, norm)
    };
    if let Some(c) = candidate {
        let (w, norm) = project_out(c);
        if norm > 0.5 {
            return w.into_iter().map(|v| v / norm).collect();
        }
    }
    for e in 0..m {
        let mut w = vec![0.0; m];
        w[e] = 1.0;
        let (w, norm) = project_out(w);
        if norm > 0.5 {
            return w.into_iter().map(|v| v / norm).collect();
        }
    }
    unreachable!("fewer than m vectors always admit a completion")
}

/// Compact SVD: only the triplets above the numerical-rank threshold.
pub fn svd_compact(x: &DenseMatrix) -> Result<SvdFactors> {
    let thin = svd_thin(x)?;
    let k = numerical_rank(&thin.singulars, x.rows(), x.cols());
    Ok(thin.truncate(k))
}

/// Default truncation threshold `max(m, n) · ε · σ₁`.
pub fn rank_tolerance(singulars: &[f64], m: usize, n: usize) -> f64 {
    let sigma1 = singulars.first().copied().unwrap_or(0.0);
    m.max(n) as f64 * f64::EPSILON * sigma1
}

/// Number of singular values strictly above [`rank_tolerance`].
pub fn numerical_rank(singulars: &[f64], m: usize, n: usize) -> usize {
    match singulars.first() {
        None => 0,
        Some(&s) if s <= 0.0 => 0,
        Some(_) => {
            let tol = rank_tolerance(singulars, m, n);
            singulars.iter().filter(|&&s| s > tol).count()
        }
    }
}

pub fn matrix_rank(x: &DenseMatrix) -> Result<usize> {
    let svd = svd_thin(x)?;
    Ok(numerical_rank(&svd.singulars, x.rows(), x.cols()))
}

/// Moore-Penrose pseudoinverse `V_k Σ_k⁻¹ U_kᵀ` over singular values
/// above `tol` (default: the numerical-rank threshold).
pub fn pseudoinverse(x: &DenseMatrix, tol: Option<f64>) -> Result<DenseMatrix> {
    let svd = svd_thin(x)?;
    let tol = tol.unwrap_or_else(|| rank_tolerance(&svd.singulars, x.rows(), x.cols()));
    let keep = svd.singulars.iter().take_while(|&&s| s > tol && s > 0.0).count();

    // V_k Σ_k⁻¹, then times U_kᵀ.
    let scaled = DenseMatrix::from_fn(x.cols(), keep, |j, k| svd.right[(j, k)] / svd.singulars[k]);
    let u_k = DenseMatrix::from_fn(x.rows(), keep, |i, k| svd.left[(i, k)]);
    Ok(scaled.matmul(&u_k.transpose()))
}

/// Index sets and factors of a CUR decomposition `X ≈ C U† R`.
#[derive(Clone, Debug)]
pub struct CurFactors {
    pub row_indices: Vec<usize>,
    pub col_indices: Vec<usize>,
    /// `X(:, J)`
    pub c: DenseMatrix,
    /// `X(I, J)`
    pub u: DenseMatrix,
    /// `X(I, :)`
    pub r: DenseMatrix,
    /// Whether `rank(U) == rank(X)`, in which case `C U† R = X`.
    pub exact: bool,
}

impl CurFactors {
    pub fn reconstruct(&self) -> Result<DenseMatrix> {
        let u_pinv = pseudoinverse(&self.u, None)?;
        Ok(self.c.matmul(&u_pinv).matmul(&self.r))
    }
}

pub(crate) fn validate_indices(indices: &[usize], bound: usize, what: &str) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::Index(format!("{what} index set is empty")));
    }
    let mut seen = vec![false; bound];
    for &i in indices {
        if i >= bound {
            return Err(Error::Index(format!(
                "{what} index {i} out of range 0..{bound}"
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Index(format!("duplicate {what} index {i}")));
        }
    }
    Ok(())
}

pub fn cur_approximation(x: &DenseMatrix, rows: &[usize], cols: &[usize]) -> Result<CurFactors> {
    validate_indices(rows, x.rows(), "row")?;
    validate_indices(cols, x.cols(), "column")?;
    let c = x.select_cols(cols);
    let u = x.submatrix(rows, cols);
    let r = x.select_rows(rows);
    let exact = matrix_rank(&u)? == matrix_rank(x)?;
    Ok(CurFactors {
        row_indices: rows.to_vec(),
        col_indices: cols.to_vec(),
        c,
        u,
        r,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    fn close(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> bool {
        a.shape() == b.shape() && a.sub(b).max_abs() <= tol
    }

    fn gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(
            DenseMatrix::new(2, 2, vec![1.0; 3]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            DenseMatrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn svd_identity() {
        let s = svd_compact(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(s.singulars, vec![1.0, 1.0]);
        assert!(close(&s.left.abs(), &DenseMatrix::identity(2), 1e-12));
        assert!(close(&s.right.abs(), &DenseMatrix::identity(2), 1e-12));
    }

    #[test]
    fn svd_diagonal_sorted() {
        let s = svd_compact(&m(&[&[3.0, 0.0], &[0.0, 4.0]])).unwrap();
        assert!((s.singulars[0] - 4.0).abs() < 1e-12);
        assert!((s.singulars[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn svd_rank_one() {
        let x = m(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let s = svd_compact(&x).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.singulars[0] - x.frobenius_norm()).abs() < 1e-12);
        assert!((s.singulars[0] - 5.0).abs() < 1e-12);
        assert!(close(&s.reconstruct(), &x, 1e-12));
    }

    #[test]
    fn svd_empty_is_error() {
        assert!(matches!(
            svd_compact(&DenseMatrix::zeros(0, 3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn svd_orthonormal_and_reconstructs_wide_and_tall() {
        let mut rng = crate::rng::from_seed(3);
        for &(rows, cols) in &[(7, 3), (3, 7), (5, 5)] {
            let x = gaussian(rows, cols, &mut rng);
            let s = svd_compact(&x).unwrap();
            let k = s.len();
            assert!(close(&s.left.transpose_matmul(&s.left), &DenseMatrix::identity(k), 1e-10));
            assert!(close(&s.right.transpose_matmul(&s.right), &DenseMatrix::identity(k), 1e-10));
            assert!(s.singulars.windows(2).all(|w| w[0] >= w[1]));
            assert!(s.reconstruct().sub(&x).frobenius_norm() <= 1e-9 * x.frobenius_norm());
            // Idempotent up to rounding.
            let again = svd_compact(&s.reconstruct()).unwrap().reconstruct();
            assert!(again.sub(&x).frobenius_norm() <= 1e-9 * x.frobenius_norm());
        }
    }

    #[test]
    fn numerical_rank_cases() {
        assert_eq!(numerical_rank(&[5.0, 1e-16], 2, 2), 1);
        assert_eq!(numerical_rank(&[3.0, 2.0, 1.0], 3, 3), 3);
        assert_eq!(numerical_rank(&[], 3, 3), 0);
        assert_eq!(numerical_rank(&[0.0, 0.0], 2, 2), 0);
    }

    #[test]
    fn pinv_diagonal() {
        let p = pseudoinverse(&m(&[&[2.0, 0.0], &[0.0, 4.0]]), None).unwrap();
        assert!(close(&p, &m(&[&[0.5, 0.0], &[0.0, 0.25]]), 1e-15));
    }

    #[test]
    fn pinv_zero_matrix() {
        let p = pseudoinverse(&DenseMatrix::zeros(2, 3), None).unwrap();
        assert_eq!(p.shape(), (3, 2));
        assert_eq!(p.max_abs(), 0.0);
    }

    #[test]
    fn pinv_rank_one() {
        let x = m(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let p = pseudoinverse(&x, None).unwrap();
        assert!(close(&p, &x.transpose().map(|v| v / 25.0), 1e-14));
        assert!(close(&x.matmul(&p).matmul(&x), &x, 1e-13));
    }

    #[test]
    fn pinv_explicit_tolerance_truncates() {
        let p = pseudoinverse(&m(&[&[2.0, 0.0], &[0.0, 1e-3]]), Some(1e-2)).unwrap();
        assert!(close(&p, &m(&[&[0.5, 0.0], &[0.0, 0.0]]), 1e-15));
    }

    #[test]
    fn cur_rank_one_example() {
        let x = m(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let f = cur_approximation(&x, &[0], &[0]).unwrap();
        assert_eq!(f.c, m(&[&[1.0], &[2.0]]));
        assert_eq!(f.u, m(&[&[1.0]]));
        assert_eq!(f.r, m(&[&[1.0, 2.0]]));
        assert!(f.exact);
        assert!(close(&f.reconstruct().unwrap(), &x, 1e-14));
    }

    #[test]
    fn cur_inexact_example() {
        let f = cur_approximation(&DenseMatrix::identity(2), &[0], &[1]).unwrap();
        assert_eq!(f.u, m(&[&[0.0]]));
        assert!(!f.exact);
    }

    #[test]
    fn cur_full_index_sets_reproduce_input() {
        let mut rng = crate::rng::from_seed(11);
        let x = gaussian(4, 6, &mut rng);
        let f = cur_approximation(&x, &[0, 1, 2, 3], &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(f.exact);
        assert!(f.reconstruct().unwrap().sub(&x).frobenius_norm() <= 1e-10 * x.frobenius_norm());
    }

    #[test]
    fn cur_index_errors() {
        let x = DenseMatrix::identity(3);
        assert!(matches!(cur_approximation(&x, &[3], &[0]), Err(Error::Index(_))));
        assert!(matches!(cur_approximation(&x, &[0, 0], &[0]), Err(Error::Index(_))));
        assert!(matches!(cur_approximation(&x, &[0], &[]), Err(Error::Index(_))));
    }

    #[test]
    fn matrix_power_matches_repeated_product() {
        let mut rng = crate::rng::from_seed(5);
        let a = gaussian(4, 4, &mut rng);
        let cube = a.matmul(&a).matmul(&a);
        assert!(close(&a.pow(3), &cube, 1e-12));
        assert_eq!(a.pow(1), a);
    }
}
