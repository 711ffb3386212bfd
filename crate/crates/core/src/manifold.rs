//! The product of spheres `(S^{p-1})^n`: `n x p` matrices with unit rows.

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::{self, Rng};
use crate::symlin::{dot, norm, parse_floats, render_rows, Mat, SymMatrix};

/// Unit-row tolerance of a [`Configuration`].
pub const UNIT_ROW_TOL: f64 = 1e-10;
/// Tangency tolerance of a [`TangentVector`], relative to the row norm.
pub const TANGENT_TOL: f64 = 1e-10;
/// Retraction refuses rows whose norm falls below this.
pub const DEGENERATE_ROW_NORM: f64 = 1e-14;

/// A point `V` of `(S^{p-1})^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    v: Mat,
}

impl Configuration {
    /// Validates unit rows.
    pub fn new(v: Mat) -> Result<Self> {
        check_dims(&v)?;
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        for i in 0..v.rows() {
            let r = norm(v.row(i));
            if (r - 1.0).abs() > UNIT_ROW_TOL {
                return Err(Error::BadParameter(format!(
                    "row {i} has norm {r}, expected 1"
                )));
            }
        }
        Ok(Configuration { v })
    }

    /// Normalizes every row of `v`.
    pub fn normalized(mut v: Mat) -> Result<Self> {
        check_dims(&v)?;
        for i in 0..v.rows() {
            let r = norm(v.row(i));
            if !(r >= DEGENERATE_ROW_NORM) || !r.is_finite() {
                return Err(Error::DegenerateRow { row: i, norm: r });
            }
            v.row_mut(i).iter_mut().for_each(|x| *x /= r);
        }
        Ok(Configuration { v })
    }

    /// `1_n z^T` for a unit vector `z`: the synchronized state.
    pub fn synchronized(n: usize, z: &[f64]) -> Result<Self> {
        let zn = norm(z);
        Configuration::new(Mat::from_fn(n, z.len(), |_, j| z[j] / zn))
    }

    /// The canonical minimizer `(1/sqrt(p)) 1_n 1_p^T`.
    pub fn optimal(n: usize, p: usize) -> Self {
        let s = 1.0 / (p as f64).sqrt();
        Configuration {
            v: Mat::from_fn(n, p, |_, _| s),
        }
    }

    pub fn n(&self) -> usize {
        self.v.rows()
    }

    pub fn p(&self) -> usize {
        self.v.cols()
    }

    pub fn as_mat(&self) -> &Mat {
        &self.v
    }

    pub fn into_mat(self) -> Mat {
        self.v
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.v.row(i)
    }

    /// `V V^T`.
    pub fn gram(&self) -> SymMatrix {
        self.v.gram_rows()
    }

    /// `V^T 1_n`.
    pub fn col_sums(&self) -> Vec<f64> {
        self.v.col_sums()
    }

    /// Order parameter `||V^T 1|| / n`, equal to 1 exactly when all rows agree.
    pub fn order_parameter(&self) -> f64 {
        norm(&self.col_sums()) / self.n() as f64
    }

    /// `||V V^T - x x^T||_F`.
    pub fn distance_to_rank_one(&self, x: &[f64]) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = dot(self.row(i), self.row(j)) - x[i] * x[j];
                s += d * d;
            }
        }
        s.sqrt()
    }

    /// `V G` for a `p x p` matrix `G` (expected orthogonal).
    pub fn rotated(&self, g: &Mat) -> Result<Self> {
        let vg = self.v.matmul(g)?;
        Configuration::normalized(vg)
    }

    /// `diag(s) V` for a sign vector `s`; rows stay unit.
    pub fn flip_rows(&self, s: &[f64]) -> Self {
        let mut v = self.v.clone();
        for (i, &si) in s.iter().enumerate() {
            v.row_mut(i).iter_mut().for_each(|x| *x *= si);
        }
        Configuration { v }
    }

    /// Parses `n p` followed by `n` rows of `p` floats. Rows within `1e-6` of
    /// unit norm are renormalized; anything further off is rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty configuration file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [n, p] = dims[..] else {
            return Err(Error::Parse(format!("header {header:?} must be `n p`")));
        };
        let mut data = Vec::with_capacity(n * p);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {i}")))?;
            let row = parse_floats(line)?;
            if row.len() != p {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {p}", row.len())));
            }
            let r = norm(&row);
            if (r - 1.0).abs() > 1e-6 {
                return Err(Error::Parse(format!("row {i} has norm {r}, not within 1e-6 of 1")));
            }
            if (r - 1.0).abs() > UNIT_ROW_TOL {
                data.extend(row.iter().map(|x| x / r));
            } else {
                data.extend(row);
            }
        }
        Configuration::new(Mat::from_vec(n, p, data)?)
    }

    pub fn to_text(&self) -> String {
        render_rows(&format!("{} {}", self.n(), self.p()), &self.v)
    }
}

fn check_dims(v: &Mat) -> Result<()> {
    if v.rows() == 0 || v.cols() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "configuration must be at least 1x1, got {}x{}",
            v.rows(),
            v.cols()
        )));
    }
    Ok(())
}

/// An element of `T_V (S^{p-1})^n`: rows orthogonal to the rows of `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector(Mat);

impl TangentVector {
    /// Validates `diag(dV V^T) = 0` against `base`.
    pub fn new(base: &Configuration, dv: Mat) -> Result<Self> {
        check_shape(base, &dv)?;
        if let Some((row, residual)) = tangency_violation(base, &dv, TANGENT_TOL) {
            return Err(Error::NotTangent { row, residual });
        }
        Ok(TangentVector(dv))
    }

    pub(crate) fn new_unchecked(dv: Mat) -> Self {
        TangentVector(dv)
    }

    pub fn zero(base: &Configuration) -> Self {
        TangentVector(Mat::zeros(base.n(), base.p()))
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn scaled(&self, s: f64) -> Self {
        TangentVector(self.0.scaled(s))
    }

    pub fn inner(&self, other: &TangentVector) -> f64 {
        self.0.inner(&other.0)
    }
}

pub(crate) fn check_shape(base: &Configuration, x: &Mat) -> Result<()> {
    if x.shape() != (base.n(), base.p()) {
        return Err(Error::DimensionMismatch(format!(
            "expected {}x{}, got {}x{}",
            base.n(),
            base.p(),
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

/// First row whose `|<dV_i, V_i>|` exceeds `tol * max(1, ||dV_i||)`.
pub(crate) fn tangency_violation(base: &Configuration, dv: &Mat, tol: f64) -> Option<(usize, f64)> {
    (0..base.n()).find_map(|i| {
        let r = dot(dv.row(i), base.row(i));
        (r.abs() > tol * norm(dv.row(i)).max(1.0)).then_some((i, r))
    })
}

/// `P_V(X) = X - ddiag(X V^T) V`.
pub fn project_tangent(v: &Configuration, x: &Mat) -> Result<TangentVector> {
    check_shape(v, x)?;
    let mut out = x.clone();
    for i in 0..v.n() {
        let vi = v.row(i);
        let c = dot(x.row(i), vi);
        for (o, &a) in out.row_mut(i).iter_mut().zip(vi) {
            *o -= c * a;
        }
    }
    Ok(TangentVector(out))
}

/// Metric-projection retraction: row-normalize `V + t dV`.
pub fn retract(v: &Configuration, dv: &TangentVector, t: f64) -> Result<Configuration> {
    check_shape(v, dv.as_mat())?;
    if t == 0.0 {
        return Ok(v.clone());
    }
    let moved = v.as_mat().add_scaled(t, dv.as_mat());
    Configuration::normalized(moved)
}

/// Rows drawn i.i.d. uniformly on `S^{p-1}` (normalized standard Gaussians).
pub fn random_configuration(n: usize, p: usize, seed: u64) -> Configuration {
    random_configuration_with(&mut rng::seeded(seed), n, p)
}

pub fn random_configuration_with(rng: &mut Rng, n: usize, p: usize) -> Configuration {
    assert!(n >= 1 && p >= 1, "need n, p >= 1");
    let mut v = Mat::zeros(n, p);
    for i in 0..n {
        loop {
            let row = v.row_mut(i);
            for x in row.iter_mut() {
                *x = rng.sample(StandardNormal);
            }
            let r = norm(row);
            if r > 1e-300 {
                row.iter_mut().for_each(|x| *x /= r);
                break;
            }
        }
    }
    Configuration { v }
}

/// A standard Gaussian matrix projected onto `T_V`.
pub fn random_tangent(rng: &mut Rng, v: &Configuration) -> TangentVector {
    let x = Mat::from_fn(v.n(), v.p(), |_, _| rng.sample(StandardNormal));
    project_tangent(v, &x).expect("shapes agree by construction")
}

/// Rotates the columns of `V` so that `(VG)^T 1` is `(||V^T 1||, 0, ..., 0)`.
///
/// Uses the Householder reflection sending `u = V^T 1 / ||V^T 1||` to
/// `-sign(u_1) e_1`, then flips column 1 if its sum came out negative. When
/// `V^T 1` vanishes the input is returned with `G = I`.
pub fn align_columns(v: &Configuration) -> (Configuration, Mat) {
    let p = v.p();
    let s = v.col_sums();
    let s_norm = norm(&s);
    if s_norm <= 1e-14 * v.n() as f64 {
        return (v.clone(), Mat::identity(p));
    }
    let mut w: Vec<f64> = s.iter().map(|x| x / s_norm).collect();
    let sign = if w[0] >= 0.0 { 1.0 } else { -1.0 };
    w[0] += sign;
    let ww = dot(&w, &w);
    let mut g = Mat::from_fn(p, p, |a, b| {
        let id = if a == b { 1.0 } else { 0.0 };
        id - 2.0 * w[a] * w[b] / ww
    });
    // The reflection maps u to -sign(u_1) e_1.
    if sign > 0.0 {
        for a in 0..p {
            g[(a, 0)] = -g[(a, 0)];
        }
    }
    let vg = v.rotated(&g).expect("orthogonal rotation keeps rows away from zero");
    (vg, g)
}
