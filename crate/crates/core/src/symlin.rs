//! Dense real linear algebra for the small, fully populated matrices used
//! throughout the crate.
//!
//! [`Mat`] is a plain row-major rectangular matrix (used for configurations
//! `V` and tangent vectors). [`SymMatrix`] wraps a square `Mat` and keeps it
//! exactly symmetric. The eigensolver is a cyclic Jacobi method: slow for large
//! matrices, but very accurate, which is what the spectral tests need.

use std::fmt::Write as _;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds from a row-major buffer.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "buffer of length {} for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().copied().collect();
        Ok(Mat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self * self^T`.
    pub fn gram_rows(&self) -> SymMatrix {
        let n = self.rows;
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = dot(self.row(i), self.row(j));
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        SymMatrix(out)
    }

    /// `self^T * self`.
    pub fn gram_cols(&self) -> SymMatrix {
        let p = self.cols;
        let mut out = Mat::zeros(p, p);
        for r in 0..self.rows {
            let row = self.row(r);
            for a in 0..p {
                for b in a..p {
                    out[(a, b)] += row[a] * row[b];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                out[(a, b)] = out[(b, a)];
            }
        }
        SymMatrix(out)
    }

    /// Column sums, i.e. `self^T 1`.
    pub fn col_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (acc, &v) in s.iter_mut().zip(self.row(i)) {
                *acc += v;
            }
        }
        s
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius inner product.
    pub fn inner(&self, other: &Mat) -> f64 {
        debug_assert_eq!(self.shape(), other.shape());
        dot(&self.data, &other.data)
    }

    pub fn scaled(&self, s: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &Mat) -> Mat {
        debug_assert_eq!(self.shape(), other.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + s * b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add_scaled(-1.0, other)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Dense symmetric matrix. Entries `(i, j)` and `(j, i)` are bit-identical.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(Mat);

impl SymMatrix {
    /// Symmetrizes `a` as `(A + A^T) / 2`.
    pub fn from_mat(a: Mat) -> Result<Self> {
        let (r, c) = a.shape();
        if r != c || r == 0 {
            return Err(Error::DimensionMismatch(format!(
                "expected a non-empty square matrix, got {r}x{c}"
            )));
        }
        let mut a = a;
        for i in 0..r {
            for j in (i + 1)..r {
                let v = 0.5 * (a[(i, j)] + a[(j, i)]);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        Ok(SymMatrix(a))
    }

    /// Evaluates `f` on the upper triangle (including the diagonal) and mirrors it.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "SymMatrix needs n >= 1");
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        SymMatrix(a)
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix::from_upper(n, |_, _| 0.0)
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix::from_upper(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// The all-ones matrix `1 1^T`.
    pub fn ones(n: usize) -> Self {
        SymMatrix::from_upper(n, |_, _| 1.0)
    }

    pub fn diag(d: &[f64]) -> Self {
        SymMatrix::from_upper(d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.0.rows
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self[(i, i)]).sum()
    }

    /// `1^T A 1`.
    pub fn sum(&self) -> f64 {
        self.0.data.iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    /// Max absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.n())
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn inner(&self, other: &SymMatrix) -> f64 {
        self.0.inner(&other.0)
    }

    /// `<P_perp, A> = tr(A) - (1/n) 1^T A 1`, without forming `P_perp`.
    pub fn centered_trace(&self) -> f64 {
        self.trace() - self.sum() / self.n() as f64
    }

    /// `P_perp A P_perp`: subtract row and column means, add back the grand mean.
    pub fn center(&self) -> SymMatrix {
        let n = self.n();
        let nf = n as f64;
        let means: Vec<f64> = (0..n).map(|i| self.row(i).iter().sum::<f64>() / nf).collect();
        let grand = means.iter().sum::<f64>() / nf;
        SymMatrix::from_upper(n, |i, j| self[(i, j)] - means[i] - means[j] + grand)
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        SymMatrix(self.0.scaled(s))
    }

    pub fn add_scaled(&self, s: f64, other: &SymMatrix) -> SymMatrix {
        SymMatrix(self.0.add_scaled(s, &other.0))
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.add_scaled(-1.0, other)
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n()).map(|i| dot(self.row(i), x)).collect()
    }

    /// `A X` for an `n x p` matrix `X`.
    pub fn mul_mat(&self, x: &Mat) -> Result<Mat> {
        self.0.matmul(x)
    }

    /// `D A D` with `D = diag(d)`.
    pub fn congruence_diag(&self, d: &[f64]) -> SymMatrix {
        SymMatrix::from_upper(self.n(), |i, j| d[i] * self[(i, j)] * d[j])
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn eig(&self) -> Result<EigenDecomp> {
        eig(self)
    }

    pub fn spectral_norm(&self) -> Result<f64> {
        spectral_norm(self)
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        is_psd(self, tol)
    }

    /// Parses the shared text format: a line holding `n`, then `n` rows of
    /// `n` floats. Asymmetry up to `1e-12 * max(1, ||A||_inf)` is averaged away;
    /// anything larger is rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad header {header:?}, expected a dimension")))?;
        if n == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {i}")))?;
            let row = parse_floats(line)?;
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing data after the last row".into()));
        }
        let a = Mat::from_vec(n, n, data)?;
        if !a.is_finite() {
            return Err(Error::NonFinite);
        }
        let inf_norm = (0..n)
            .map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let tol = 1e-12 * inf_norm.max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let gap = (a[(i, j)] - a[(j, i)]).abs();
                if gap > tol {
                    return Err(Error::SymmetryViolation { i, j, gap, tol });
                }
            }
        }
        SymMatrix::from_mat(a)
    }

    /// Renders in the shared text format. Rust's float formatting is
    /// shortest-round-trip, so `parse(to_text(a)) == a` bit for bit.
    pub fn to_text(&self) -> String {
        render_rows(&format!("{}", self.n()), &self.0)
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

pub(crate) fn parse_floats(line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {tok:?}")))
        })
        .collect()
}

pub(crate) fn render_rows(header: &str, m: &Mat) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for i in 0..m.rows() {
        for (j, v) in m.row(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{v:?}");
        }
        out.push('\n');
    }
    out
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// (column `k` of `vectors` pairs with `values[k]`).
#[derive(Clone, Debug)]
pub struct EigenDecomp {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

impl EigenDecomp {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.col(k)
    }

    /// `Q diag(values) Q^T`.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.values.len();
        let q = &self.vectors;
        SymMatrix::from_upper(n, |i, j| {
            (0..n).map(|k| q[(i, k)] * self.values[k] * q[(j, k)]).sum()
        })
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps over all `(p, q)` pairs until the off-diagonal Frobenius mass drops
/// to `1e-12 * ||A||_F`. Eigenvectors are accumulated as rows of `Q^T` so that
/// every rotation touches contiguous memory.
pub fn eig(a: &SymMatrix) -> Result<EigenDecomp> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.n();
    let mut m = a.as_mat().as_slice().to_vec();
    let mut qt = Mat::identity(n).data;
    let target = 1e-12 * a.frobenius_norm();

    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += m[p * n + q] * m[p * n + q];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                rotate_rows(&mut m, n, p, q, c, s);
                for k in 0..n {
                    m[k * n + p] = m[p * n + k];
                    m[k * n + q] = m[q * n + k];
                }
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;

                rotate_rows(&mut qt, n, p, q, c, s);
            }
        }
    }
    if !converged && off_norm(&m) > target {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&k| m[k * n + k]).collect();
    let vectors = Mat::from_fn(n, n, |i, k| qt[order[k] * n + i]);
    Ok(EigenDecomp { values, vectors })
}

/// Rows `p < q` of a row-major `n x n` buffer become
/// `(c r_p - s r_q, s r_p + c r_q)`.
fn rotate_rows(m: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = m.split_at_mut(q * n);
    let rp = &mut head[p * n..(p + 1) * n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let a = *x;
        let b = *y;
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Largest eigenvalue magnitude.
pub fn spectral_norm(a: &SymMatrix) -> Result<f64> {
    let e = eig(a)?;
    Ok(e.min().abs().max(e.max().abs()))
}

/// Entrywise product.
pub fn hadamard(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(format!(
            "hadamard of {}x{} and {}x{}",
            a.n(),
            a.n(),
            b.n(),
            b.n()
        )));
    }
    Ok(SymMatrix::from_upper(a.n(), |i, j| a[(i, j)] * b[(i, j)]))
}

/// `I - (1/n) 1 1^T`.
pub fn centering_projector(n: usize) -> SymMatrix {
    let inv = 1.0 / n as f64;
    SymMatrix::from_upper(n, |i, j| if i == j { 1.0 - inv } else { -inv })
}

/// `lambda_min(A) >= -tol * max(1, ||A||)`.
pub fn is_psd(a: &SymMatrix, tol: f64) -> Result<bool> {
    let e = eig(a)?;
    let scale = e.min().abs().max(e.max().abs()).max(1.0);
    Ok(e.min() >= -tol * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn identity_spectrum() {
        let e = eig(&SymMatrix::identity(3)).unwrap();
        assert!(close(&e.values, &[1.0, 1.0, 1.0], 1e-15));
    }

    #[test]
    fn shifted_ones_spectrum() {
        let a = SymMatrix::identity(4).scaled(4.0).sub(&SymMatrix::ones(4));
        let e = eig(&a).unwrap();
        assert!(close(&e.values, &[0.0, 4.0, 4.0, 4.0], 1e-13), "{:?}", e.values);
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let e = eig(&SymMatrix::diag(&[2.0, -1.0])).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0]);
    }

    #[test]
    fn nonfinite_rejected() {
        let mut m = Mat::identity(2);
        m[(0, 1)] = f64::NAN;
        let a = SymMatrix::from_mat(m).unwrap();
        assert!(matches!(eig(&a), Err(Error::NonFinite)));
        assert!(matches!(spectral_norm(&a), Err(Error::NonFinite)));
    }

    #[test]
    fn spectral_norm_examples() {
        assert_eq!(spectral_norm(&SymMatrix::zeros(3)).unwrap(), 0.0);
        assert!((spectral_norm(&SymMatrix::ones(3)).unwrap() - 3.0).abs() < 1e-14);
        assert!((spectral_norm(&SymMatrix::identity(2).scaled(-2.0)).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hadamard_identities() {
        let a = SymMatrix::from_upper(3, |i, j| (i + 2 * j) as f64 - 1.5);
        assert_eq!(hadamard(&a, &SymMatrix::ones(3)).unwrap(), a);
        assert_eq!(hadamard(&a, &SymMatrix::zeros(3)).unwrap(), SymMatrix::zeros(3));
        assert!(matches!(
            hadamard(&a, &SymMatrix::zeros(2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn centering_projector_examples() {
        assert_eq!(centering_projector(1)[(0, 0)], 0.0);
        let p2 = centering_projector(2);
        assert_eq!(p2.as_mat().to_rows(), vec![vec![0.5, -0.5], vec![-0.5, 0.5]]);
        let p7 = centering_projector(7);
        let sq = p7.mul_mat(p7.as_mat()).unwrap();
        assert!(sq.sub(p7.as_mat()).max_abs() < 1e-15);
        assert!((p7.trace() - 6.0).abs() < 1e-12);
        let killed = p7.mul_vec(&[1.0; 7]);
        assert!(norm(&killed) <= 1e-12 * 7f64.sqrt());
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&SymMatrix::identity(5), 0.0).unwrap());
        assert!(!is_psd(&SymMatrix::diag(&[-1.0, 1.0]), 1e-9).unwrap());
        for n in [2, 5, 9] {
            let a = SymMatrix::identity(n).scaled(n as f64).sub(&SymMatrix::ones(n));
            assert!(is_psd(&a, 1e-9).unwrap());
        }
    }

    #[test]
    fn center_matches_projector_products() {
        let a = SymMatrix::from_upper(5, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let p = centering_projector(5);
        let direct = p
            .as_mat()
            .matmul(a.as_mat())
            .unwrap()
            .matmul(p.as_mat())
            .unwrap();
        assert!(a.center().as_mat().sub(&direct).max_abs() < 1e-13);
        assert!((a.centered_trace() - p.inner(&a)).abs() < 1e-13);
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let a = SymMatrix::from_upper(4, |i, j| 1.0 / (1.0 + i as f64 + 3.0 * j as f64) - 0.1);
        let back = SymMatrix::parse(&a.to_text()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(SymMatrix::parse("two\n1 2\n2 1\n"), Err(Error::Parse(_))));
        assert!(matches!(SymMatrix::parse("2\n1 2\n"), Err(Error::Parse(_))));
        assert!(matches!(SymMatrix::parse("2\n1 2 3\n2 1\n"), Err(Error::Parse(_))));
        assert!(matches!(
            SymMatrix::parse("2\n1 2\n2.001 1\n"),
            Err(Error::SymmetryViolation { .. })
        ));
        let a = SymMatrix::parse("2\n1 2\n2.0000000000000004 1\n").unwrap();
        assert_eq!(a[(0, 1)], a[(1, 0)]);
    }
}
