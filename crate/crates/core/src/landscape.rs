//! Landscape of the factorized problem `min <L, V V^T>` over `(S^{p-1})^n`.
//!
//! Everything here works with the reduced objective built from the Laplacian
//! `L = ddiag(C x x^T) - C`. Maximizing `<C, V V^T>` and minimizing
//! `<L, V V^T>` have the same critical points with the same curvature, since
//! the two objectives differ by a constant on the manifold once the diagonal
//! of `C` is shifted away.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::manifold::{check_shape, tangency_violation, Configuration, TangentVector};
use crate::symlin::{dot, norm, EigenDecomp, Mat, SymMatrix};

/// Slack used by the spectral verdicts.
pub const VERDICT_TOL: f64 = 1e-9;
/// Largest tangent Hessian we are willing to form densely.
pub const HESSIAN_CAP: usize = 5000;

/// `L = ddiag(C x x^T) - C` with its spectrum.
#[derive(Clone, Debug)]
pub struct Laplacian {
    l: SymMatrix,
    x: Vec<f64>,
    spectrum: EigenDecomp,
    norm: f64,
}

/// Rank-one optimality of `x x^T` for the SDP relaxation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rank1Status {
    UniqueOptimal,
    OptimalMaybeNotUnique,
    NotCertified,
}

/// Outcome of the condition-number test `p > lambda_n / lambda_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Theorem1Verdict {
    BenignCertified,
    NotCertified,
}

pub fn check_sign_vector(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| v.abs() != 1.0) {
        Some(index) => Err(Error::BadSignVector {
            index,
            value: x[index],
        }),
        None => Ok(()),
    }
}

/// Builds `ddiag(C x x^T) - C`.
pub fn build_laplacian(c: &SymMatrix, x: &[f64]) -> Result<Laplacian> {
    if x.len() != c.n() {
        return Err(Error::DimensionMismatch(format!(
            "sign vector of length {} for a {}x{} cost matrix",
            x.len(),
            c.n(),
            c.n()
        )));
    }
    check_sign_vector(x)?;
    let cx = c.mul_vec(x);
    let l = SymMatrix::from_upper(c.n(), |i, j| {
        let d = if i == j { cx[i] * x[i] } else { 0.0 };
        d - c[(i, j)]
    });
    Laplacian::from_parts(l, x.to_vec())
}

impl Laplacian {
    /// Wraps a matrix already in Laplacian form. Requires `n >= 2` and
    /// `||L x|| <= 1e-10 max(1, ||L||) sqrt(n)`.
    pub fn from_parts(l: SymMatrix, x: Vec<f64>) -> Result<Self> {
        let n = l.n();
        if n < 2 {
            return Err(Error::BadParameter("Laplacian needs n >= 2".into()));
        }
        if x.len() != n {
            return Err(Error::DimensionMismatch("sign vector length".into()));
        }
        check_sign_vector(&x)?;
        let spectrum = l.eig()?;
        let lnorm = spectrum.min().abs().max(spectrum.max().abs());
        let residual = norm(&l.mul_vec(&x));
        if residual > 1e-10 * lnorm.max(1.0) * (n as f64).sqrt() {
            return Err(Error::BadParameter(format!(
                "matrix does not annihilate the ground truth: ||L x|| = {residual:e}"
            )));
        }
        Ok(Laplacian {
            l,
            x,
            spectrum,
            norm: lnorm,
        })
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.l
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.l.n()
    }

    pub fn spectrum(&self) -> &EigenDecomp {
        &self.spectrum
    }

    pub fn lambda1(&self) -> f64 {
        self.spectrum.values[0]
    }

    pub fn lambda2(&self) -> f64 {
        self.spectrum.values[1]
    }

    pub fn lambda_n(&self) -> f64 {
        self.spectrum.max()
    }

    /// Spectral norm `||L||`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn condition_number(&self) -> f64 {
        self.lambda_n() / self.lambda2()
    }

    /// Ground truth is `1_n`.
    pub fn is_canonical(&self) -> bool {
        self.x.iter().all(|&v| v == 1.0)
    }

    /// The same landscape after `V -> diag(x) V`: `diag(x) L diag(x)` with
    /// ground truth `1_n`. The spectrum is unchanged.
    pub fn canonical(&self) -> Laplacian {
        if self.is_canonical() {
            return self.clone();
        }
        let l = self.l.congruence_diag(&self.x);
        let mut vectors = self.spectrum.vectors.clone();
        for i in 0..self.n() {
            vectors.row_mut(i).iter_mut().for_each(|v| *v *= self.x[i]);
        }
        Laplacian {
            l,
            x: vec![1.0; self.n()],
            spectrum: EigenDecomp {
                values: self.spectrum.values.clone(),
                vectors,
            },
            norm: self.norm,
        }
    }
}

/// Classifies `x x^T` as a solution of the SDP from the spectrum of `L`.
pub fn rank1_optimality(l: &Laplacian, tol: f64) -> Rank1Status {
    let scale = l.norm().max(1.0);
    if l.lambda1() < -tol * scale {
        Rank1Status::NotCertified
    } else if l.lambda2() > tol * scale {
        Rank1Status::UniqueOptimal
    } else {
        Rank1Status::OptimalMaybeNotUnique
    }
}

/// `p > lambda_n / lambda_2` (strictly, with relative slack) on top of unique
/// rank-one optimality.
pub fn theorem1_verdict(l: &Laplacian, p: usize) -> Theorem1Verdict {
    if rank1_optimality(l, VERDICT_TOL) != Rank1Status::UniqueOptimal {
        return Theorem1Verdict::NotCertified;
    }
    if p as f64 > l.condition_number() * (1.0 + VERDICT_TOL) {
        Theorem1Verdict::BenignCertified
    } else {
        Theorem1Verdict::NotCertified
    }
}

fn check_config(l: &Laplacian, v: &Configuration) -> Result<()> {
    if v.n() != l.n() {
        return Err(Error::DimensionMismatch(format!(
            "configuration has {} rows, Laplacian is {}x{}",
            v.n(),
            l.n(),
            l.n()
        )));
    }
    Ok(())
}

/// Row-wise multipliers `mu = diag(L V V^T)` together with `L V`.
fn multipliers(l: &Laplacian, v: &Configuration) -> (Mat, Vec<f64>) {
    let lv = l.matrix().mul_mat(v.as_mat()).expect("checked dimensions");
    let mu = (0..v.n()).map(|i| dot(lv.row(i), v.row(i))).collect();
    (lv, mu)
}

/// `<L, V V^T>`.
pub fn energy(l: &Laplacian, v: &Configuration) -> Result<f64> {
    check_config(l, v)?;
    let (_, mu) = multipliers(l, v);
    Ok(mu.iter().sum())
}

/// `2 (L - ddiag(L V V^T)) V`.
pub fn riemannian_gradient(l: &Laplacian, v: &Configuration) -> Result<TangentVector> {
    check_config(l, v)?;
    let (mut g, mu) = multipliers(l, v);
    for i in 0..v.n() {
        let vi = v.row(i);
        for (gk, &vk) in g.row_mut(i).iter_mut().zip(vi) {
            *gk = 2.0 * (*gk - mu[i] * vk);
        }
    }
    Ok(TangentVector::new_unchecked(g))
}

/// Tangency slack accepted by [`hessian_quadratic_form`].
pub const HESSIAN_TANGENT_TOL: f64 = 1e-8;

/// `2 <(L - ddiag(L V V^T)) dV, dV>`.
pub fn hessian_quadratic_form(l: &Laplacian, v: &Configuration, dv: &Mat) -> Result<f64> {
    check_config(l, v)?;
    check_shape(v, dv)?;
    if let Some((row, residual)) = tangency_violation(v, dv, HESSIAN_TANGENT_TOL) {
        return Err(Error::NotTangent { row, residual });
    }
    let (_, mu) = multipliers(l, v);
    Ok(quadratic_form_with(l, &mu, dv))
}

fn quadratic_form_with(l: &Laplacian, mu: &[f64], dv: &Mat) -> f64 {
    let ldv = l.matrix().mul_mat(dv).expect("checked dimensions");
    let mut s = 0.0;
    for i in 0..dv.rows() {
        let r = dv.row(i);
        s += dot(ldv.row(i), r) - mu[i] * dot(r, r);
    }
    2.0 * s
}

/// The Riemannian Hessian written in an orthonormal basis of the tangent space.
///
/// Coordinates are grouped by row: entries `i (p-1) .. (i+1)(p-1)` are the
/// coefficients of `dV_i` in `basis[i]`, an orthonormal basis of the
/// complement of `V_i` in `R^p`.
#[derive(Clone, Debug)]
pub struct TangentHessian {
    pub matrix: SymMatrix,
    pub basis: Vec<Mat>,
    p: usize,
}

impl TangentHessian {
    /// Maps a coefficient vector back to an `n x p` tangent matrix.
    pub fn to_tangent(&self, coeffs: &[f64]) -> Mat {
        let k = self.p - 1;
        let n = self.basis.len();
        let mut out = Mat::zeros(n, self.p);
        for (i, b) in self.basis.iter().enumerate() {
            let c = &coeffs[i * k..(i + 1) * k];
            for a in 0..self.p {
                out[(i, a)] = dot(b.row(a), c);
            }
        }
        out
    }

    /// Coordinates of a tangent matrix in the basis.
    pub fn coefficients(&self, dv: &Mat) -> Vec<f64> {
        let k = self.p - 1;
        let mut out = Vec::with_capacity(self.basis.len() * k);
        for (i, b) in self.basis.iter().enumerate() {
            for col in 0..k {
                out.push((0..self.p).map(|a| b[(a, col)] * dv[(i, a)]).sum());
            }
        }
        out
    }
}

/// Orthonormal basis (as columns of a `p x (p-1)` matrix) of the complement
/// of the unit vector `v`: Gram-Schmidt over the standard axes, skipping the
/// axis most aligned with `v`.
pub fn complement_basis(v: &[f64]) -> Mat {
    let p = v.len();
    let skip = (0..p)
        .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
        .unwrap_or(0);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(p - 1);
    for axis in (0..p).filter(|&a| a != skip) {
        let mut e = vec![0.0; p];
        e[axis] = 1.0;
        // Two passes of classical Gram-Schmidt.
        for _ in 0..2 {
            let c = dot(&e, v);
            e.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            for q in &cols {
                let c = dot(&e, q);
                e.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let r = norm(&e);
        e.iter_mut().for_each(|x| *x /= r);
        cols.push(e);
    }
    Mat::from_fn(p, p - 1, |a, b| cols[b][a])
}

/// Dense matrix of the Hessian quadratic form on `T_V (S^{p-1})^n`, of size
/// `n (p-1)`.
pub fn dense_tangent_hessian(l: &Laplacian, v: &Configuration) -> Result<TangentHessian> {
    check_config(l, v)?;
    let (n, p) = (v.n(), v.p());
    if p < 2 {
        return Err(Error::BadParameter("tangent Hessian needs p >= 2".into()));
    }
    let k = p - 1;
    let size = n * k;
    if size > HESSIAN_CAP {
        return Err(Error::TooLarge {
            size,
            cap: HESSIAN_CAP,
        });
    }
    let (_, mu) = multipliers(l, v);
    let basis: Vec<Mat> = (0..n).map(|i| complement_basis(v.row(i))).collect();
    let lm = l.matrix();
    let mut h = Mat::zeros(size, size);
    for i in 0..n {
        for j in i..n {
            let s_ij = lm[(i, j)] - if i == j { mu[i] } else { 0.0 };
            if s_ij == 0.0 {
                continue;
            }
            // 2 S_ij U_i^T U_j
            let (bi, bj) = (&basis[i], &basis[j]);
            for a in 0..k {
                for b in 0..k {
                    let u: f64 = (0..p).map(|r| bi[(r, a)] * bj[(r, b)]).sum();
                    let val = 2.0 * s_ij * u;
                    h[(i * k + a, j * k + b)] = val;
                    h[(j * k + b, i * k + a)] = val;
                }
            }
        }
    }
    Ok(TangentHessian {
        matrix: SymMatrix::from_mat(h)?,
        basis,
        p,
    })
}

/// Thresholds for first/second-order criticality and global optimality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub grad_tol: f64,
    pub hess_tol: f64,
    pub opt_tol: f64,
}

impl Tolerances {
    /// `grad_tol = 1e-8 max(1,||L||) sqrt(np)`, `hess_tol = 1e-8 max(1,||L||)`,
    /// `opt_tol = 1e-6`.
    pub fn for_laplacian(l: &Laplacian, p: usize) -> Self {
        let scale = l.norm().max(1.0);
        Tolerances {
            grad_tol: 1e-8 * scale * ((l.n() * p) as f64).sqrt(),
            hess_tol: 1e-8 * scale,
            opt_tol: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalityReport {
    pub grad_norm: f64,
    pub min_hess_eig: f64,
    pub energy: f64,
    pub is_first_order: bool,
    pub is_second_order: bool,
    pub is_global: bool,
}

/// Smallest eigenvalue of the tangent Hessian, with its eigenvector as a
/// unit-norm tangent matrix. For `p = 1` the tangent space is trivial and the
/// minimum is reported as 0 with no direction.
pub(crate) fn min_curvature(l: &Laplacian, v: &Configuration) -> Result<(f64, Option<Mat>)> {
    if v.p() < 2 {
        return Ok((0.0, None));
    }
    let h = dense_tangent_hessian(l, v)?;
    let e = h.matrix.eig()?;
    let dir = h.to_tangent(&e.vector(0));
    Ok((e.min(), Some(dir)))
}

/// Gradient norm, curvature, energy and the three verdicts at `V`.
pub fn classify_point(l: &Laplacian, v: &Configuration, tols: &Tolerances) -> Result<CriticalityReport> {
    let grad_norm = riemannian_gradient(l, v)?.norm();
    let (min_hess_eig, _) = min_curvature(l, v)?;
    Ok(assemble_report(l, v, tols, grad_norm, min_hess_eig))
}

pub(crate) fn assemble_report(
    l: &Laplacian,
    v: &Configuration,
    tols: &Tolerances,
    grad_norm: f64,
    min_hess_eig: f64,
) -> CriticalityReport {
    let energy = energy(l, v).expect("checked dimensions");
    let is_first_order = grad_norm <= tols.grad_tol;
    let is_second_order = is_first_order && min_hess_eig >= -tols.hess_tol;
    let is_global = v.distance_to_rank_one(l.x()) / v.n() as f64 <= tols.opt_tol;
    CriticalityReport {
        grad_norm,
        min_hess_eig,
        energy,
        is_first_order,
        is_second_order,
        is_global,
    }
}
