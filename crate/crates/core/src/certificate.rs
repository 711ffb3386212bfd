//! Dual certificates lower-bounding `lambda_n(L) / lambda_2(L)` at a
//! non-optimal second-order critical point `V`.
//!
//! A triple `(W, Z, H)` with `Z >= 0`, `H` in the cone generated by
//! `{dV dV^T : dV tangent}`, `diag(W V^T) = diag(H)` and
//! `M = P_perp (Z + H - (W V^T + V W^T)/2) P_perp >= 0` yields
//! `lambda_2 tr(P_perp Z) <= <L, M> <= lambda_n tr(M)`, hence
//! `tr(P_perp Z) / tr(M) <= lambda_n / lambda_2`.
//!
//! [`build_certificate`] constructs a triple whose ratio is at least `p` for
//! every aligned, non-optimal `V`; [`build_ling_certificate`] is the older
//! choice `W = (p-1)V`, whose ratio is only guaranteed to reach `(p-1)/2`.
//! Both depend on `V` and `p` alone, never on `L`.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::landscape::{classify_point, Laplacian, Tolerances};
use crate::manifold::Configuration;
use crate::rng;
use crate::symlin::{hadamard, Mat, SymMatrix};

/// Tolerance on the alignment assumption, relative to `n`.
pub const ALIGNMENT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    /// `W = beta (p-1) V + delta (1 e_1^T - diag(v_1) V)`, ratio `>= p`.
    Constructive,
    /// `W = (p-1) V`, `Z = (p-1) V V^T`.
    Ling,
}

/// Residuals of the constraints that hold by construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Feasibility {
    /// `max_i |diag(W V^T)_i - H_ii|`.
    pub diag_residual: f64,
    pub z_min_eig: f64,
    pub m_min_eig: f64,
}

#[derive(Clone, Debug)]
pub struct DualCertificate {
    pub kind: CertificateKind,
    pub p: usize,
    pub z: SymMatrix,
    pub h: SymMatrix,
    pub w: Mat,
    pub m: SymMatrix,
    pub beta: f64,
    pub delta: f64,
    pub t1: f64,
    pub t2: f64,
    /// `<P_perp, V V^T>`.
    pub centered_gram: f64,
    /// `<P_perp, (V V^T)^{.2}>`.
    pub centered_gram_sq: f64,
    /// `<P_perp, diag(v_1) V V^T>`.
    pub centered_v1_gram: f64,
    pub inner_z_pperp: f64,
    pub trace_m: f64,
    pub ratio: f64,
    pub feasibility: Feasibility,
}

/// Scalars shared by both certificates.
struct Moments {
    gram: SymMatrix,
    gram_sq: SymMatrix,
    a: f64,
    a_sq: f64,
    a_v1: f64,
}

fn moments(v: &Configuration, p: usize) -> Result<Moments> {
    if v.p() != p {
        return Err(Error::DimensionMismatch(format!(
            "configuration has {} columns, certificate asked for p = {p}",
            v.p()
        )));
    }
    if p < 2 {
        return Err(Error::BadParameter("certificates need p >= 2".into()));
    }
    let n = v.n();
    let gram = v.gram();
    let a = gram.centered_trace();
    if a <= 1e-12 * (n * n) as f64 {
        return Err(Error::OptimalPoint(a));
    }
    let gram_sq = hadamard(&gram, &gram)?;
    let a_sq = gram_sq.centered_trace();
    // <P_perp, diag(v1) G> = sum_i v1_i G_ii - (1/n) v1^T G 1
    let v1 = v.as_mat().col(0);
    let g1 = gram.mul_vec(&vec![1.0; n]);
    let a_v1 = (0..n).map(|i| v1[i] * gram[(i, i)]).sum::<f64>()
        - v1.iter().zip(&g1).map(|(x, y)| x * y).sum::<f64>() / n as f64;
    Ok(Moments {
        gram,
        gram_sq,
        a,
        a_sq,
        a_v1,
    })
}

/// `max(|<v_k, 1>| for k >= 2, max(0, -<v_1, 1>)) / n`.
pub fn alignment_residual(v: &Configuration) -> f64 {
    let s = v.col_sums();
    let off = s[1..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    off.max((-s[0]).max(0.0)) / v.n() as f64
}

fn assemble(
    kind: CertificateKind,
    v: &Configuration,
    p: usize,
    mo: Moments,
    z: SymMatrix,
    h: SymMatrix,
    w: Mat,
    beta: f64,
    delta: f64,
    t1: f64,
    t2: f64,
) -> Result<DualCertificate> {
    let wvt = w.matmul(&v.as_mat().transpose())?;
    let sym_wvt = SymMatrix::from_mat(wvt.clone())?;
    let m = z.add_scaled(1.0, &h).sub(&sym_wvt).center();
    let diag_residual = (0..v.n())
        .map(|i| (wvt[(i, i)] - h[(i, i)]).abs())
        .fold(0.0, f64::max);
    let z_min_eig = z.eig()?.min();
    let m_min_eig = m.eig()?.min();
    let inner_z_pperp = z.centered_trace();
    let trace_m = m.trace();
    Ok(DualCertificate {
        kind,
        p,
        z,
        h,
        w,
        m,
        beta,
        delta,
        t1,
        t2,
        centered_gram: mo.a,
        centered_gram_sq: mo.a_sq,
        centered_v1_gram: mo.a_v1,
        inner_z_pperp,
        trace_m,
        ratio: inner_z_pperp / trace_m,
        feasibility: Feasibility {
            diag_residual,
            z_min_eig,
            m_min_eig,
        },
    })
}

/// `(t1, t2)` for the configuration.
fn t_values(mo: &Moments, p: usize) -> (f64, f64) {
    let pm1 = (p - 1) as f64;
    let t1 = pm1 * mo.a - mo.a_sq;
    let t2 = -2.0 * pm1.sqrt() * mo.a_v1;
    (t1, t2)
}

/// Constructive certificate for an aligned, non-optimal `V` (call
/// [`crate::manifold::align_columns`] first).
pub fn build_certificate(v: &Configuration, p: usize) -> Result<DualCertificate> {
    let mo = moments(v, p)?;
    let residual = alignment_residual(v);
    if residual > ALIGNMENT_TOL {
        return Err(Error::Misaligned(residual));
    }
    let n = v.n();
    let pf = p as f64;
    let pm1 = pf - 1.0;
    let (t1, t2) = t_values(&mo, p);
    let r2 = t1 * t1 + t2 * t2;
    if r2 <= 1e-24 {
        return Err(Error::DegenerateT(r2));
    }
    let r = r2.sqrt();
    let beta = pf / (2.0 * pm1 * mo.a) * (1.0 + t1 / r);
    let delta = pf / (pm1.sqrt() * mo.a) * t2 / r;

    let z = mo.gram.scaled(pf / mo.a);
    let h = SymMatrix::ones(n)
        .scaled(pf - 2.0)
        .add_scaled(1.0, &mo.gram_sq)
        .scaled(beta);
    let vm = v.as_mat();
    let w = Mat::from_fn(n, p, |i, k| {
        let e1 = if k == 0 { 1.0 } else { 0.0 };
        beta * pm1 * vm[(i, k)] + delta * (e1 - vm[(i, 0)] * vm[(i, k)])
    });
    assemble(CertificateKind::Constructive, v, p, mo, z, h, w, beta, delta, t1, t2)
}

/// The implicit certificate `W = (p-1)V`, `Z = (p-1)VV^T`,
/// `H = (p-2) 1 1^T + (VV^T)^{.2}`. Alignment is not required.
pub fn build_ling_certificate(v: &Configuration, p: usize) -> Result<DualCertificate> {
    let mo = moments(v, p)?;
    let n = v.n();
    let pm1 = (p - 1) as f64;
    let (t1, t2) = t_values(&mo, p);
    let z = mo.gram.scaled(pm1);
    let h = SymMatrix::ones(n).scaled(p as f64 - 2.0).add_scaled(1.0, &mo.gram_sq);
    let w = v.as_mat().scaled(pm1);
    assemble(CertificateKind::Ling, v, p, mo, z, h, w, 1.0, 0.0, t1, t2)
}

/// `P_perp (V V^T)^{.2} P_perp`, the simplified form of the Ling `M`.
pub fn ling_m_closed_form(v: &Configuration) -> SymMatrix {
    let g = v.gram();
    hadamard(&g, &g).expect("same size").center()
}

/// One verified inequality: `residual` is the signed amount by which the
/// constraint is violated (non-positive when it holds exactly).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Verification {
    #[serde(rename = "H2")]
    pub h2: Check,
    #[serde(rename = "H3")]
    pub h3: Check,
    pub trace_identity: Check,
    #[serde(rename = "M_psd")]
    pub m_psd: Check,
    pub trace_le_1: Check,
    pub ratio_ge_p: Check,
}

impl Verification {
    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.pass)
    }

    pub fn checks(&self) -> [(&'static str, Check); 6] {
        [
            ("H2", self.h2),
            ("H3", self.h3),
            ("trace_identity", self.trace_identity),
            ("M_psd", self.m_psd),
            ("trace_le_1", self.trace_le_1),
            ("ratio_ge_p", self.ratio_ge_p),
        ]
    }
}

/// Re-derives the six conditions that make `cert` a valid certificate of
/// ratio `>= p`. Failures are recorded, never raised.
pub fn verify_certificate(cert: &DualCertificate, v: &Configuration) -> Verification {
    let pf = cert.p as f64;
    let pm1 = pf - 1.0;
    let a = cert.centered_gram;
    let k = pf / (2.0 * pm1 * a);

    let h2_res = (cert.beta - k).powi(2) + (cert.delta / (2.0 * pm1.sqrt())).powi(2) - k * k;
    let h3_lhs = cert.t1 * cert.beta + cert.t2 * cert.delta / (2.0 * pm1.sqrt());
    let h3_res = pm1 - h3_lhs;

    // Trace identity, evaluated from V directly rather than from the stored
    // moments.
    let g = v.gram();
    let g2 = hadamard(&g, &g).expect("same size");
    let n = v.n();
    let v1 = v.as_mat().col(0);
    let d1g_inner = {
        // <P_perp, diag(v1) G> through the explicit projector.
        let pp = crate::symlin::centering_projector(n);
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += pp[(i, j)] * v1[i] * g[(i, j)];
            }
        }
        s
    };
    let predicted = cert.beta * (g2.centered_trace() - pm1 * g.centered_trace())
        + cert.delta * d1g_inner
        + cert.inner_z_pperp;
    let ti_res = (cert.trace_m - predicted).abs();

    let m_norm = cert
        .m
        .spectral_norm()
        .unwrap_or(f64::INFINITY)
        .max(1.0);
    let m_min = cert.feasibility.m_min_eig;

    Verification {
        h2: Check {
            pass: h2_res <= 1e-10,
            residual: h2_res,
        },
        h3: Check {
            pass: h3_res <= 1e-9 * pm1.max(1.0),
            residual: h3_res,
        },
        trace_identity: Check {
            pass: ti_res <= 1e-9 * predicted.abs().max(1.0),
            residual: ti_res,
        },
        m_psd: Check {
            pass: m_min >= -1e-8 * m_norm,
            residual: -m_min,
        },
        trace_le_1: Check {
            pass: cert.trace_m <= 1.0 + 1e-9,
            residual: cert.trace_m - 1.0,
        },
        ratio_ge_p: Check {
            pass: cert.ratio >= pf - 1e-7,
            residual: pf - cert.ratio,
        },
    }
}

/// The bounding chain `lambda_2 tr(P_perp Z) <= <L, M> <= lambda_n tr(M)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertifiedBound {
    pub ratio: f64,
    pub lambda2_trace_pz: f64,
    pub inner_l_m: f64,
    pub lambda_n_trace_m: f64,
    pub condition_number: f64,
}

/// Checks that `V` is second-order critical for `L` and that the chain holds
/// to `1e-8` relative; returns the certified lower bound on the condition
/// number. `L` must be in the canonical frame `x = 1_n`.
pub fn certified_cond_lower_bound(
    l: &Laplacian,
    cert: &DualCertificate,
    v: &Configuration,
) -> Result<CertifiedBound> {
    if !l.is_canonical() {
        return Err(Error::NonCanonicalFrame);
    }
    let tols = Tolerances::for_laplacian(l, v.p());
    let rep = classify_point(l, v, &tols)?;
    if !rep.is_second_order {
        return Err(Error::NotCritical {
            grad_norm: rep.grad_norm,
            min_hess_eig: rep.min_hess_eig,
        });
    }
    let lower = l.lambda2() * cert.inner_z_pperp;
    let mid = l.matrix().inner(&cert.m);
    let upper = l.lambda_n() * cert.trace_m;
    let slack = |x: f64| 1e-8 * x.abs().max(1.0);
    if lower > mid + slack(mid) {
        return Err(Error::ChainViolation(format!(
            "lambda_2 tr(P_perp Z) = {lower} exceeds <L, M> = {mid}"
        )));
    }
    if mid > upper + slack(upper) {
        return Err(Error::ChainViolation(format!(
            "<L, M> = {mid} exceeds lambda_n tr(M) = {upper}"
        )));
    }
    Ok(CertifiedBound {
        ratio: cert.ratio,
        lambda2_trace_pz: lower,
        inner_l_m: mid,
        lambda_n_trace_m: upper,
        condition_number: l.condition_number(),
    })
}

/// Empirical mean of `dV dV^T` with `dV = P_V(1_n phi^T)`, `phi ~ N(0, I_p)`.
/// Converges to `(p-2) 1 1^T + (V V^T)^{.2}`.
pub fn tangent_outer_mean(v: &Configuration, draws: usize, seed: u64) -> SymMatrix {
    let (n, p) = (v.n(), v.p());
    let mut r = rng::seeded(seed);
    let mut acc = Mat::zeros(n, n);
    let mut dv = Mat::zeros(n, p);
    let mut phi = vec![0.0; p];
    for _ in 0..draws {
        phi.iter_mut().for_each(|x| *x = r.sample(StandardNormal));
        for i in 0..n {
            let vi = v.row(i);
            let c: f64 = vi.iter().zip(&phi).map(|(a, b)| a * b).sum();
            for (o, (&f, &a)) in dv.row_mut(i).iter_mut().zip(phi.iter().zip(vi)) {
                *o = f - c * a;
            }
        }
        for i in 0..n {
            for j in i..n {
                let s: f64 = dv.row(i).iter().zip(dv.row(j)).map(|(a, b)| a * b).sum();
                acc[(i, j)] += s;
            }
        }
    }
    let inv = 1.0 / draws as f64;
    SymMatrix::from_upper(n, |i, j| acc[(i, j)] * inv)
}

/// Serializable summary of a certificate and its verification.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateAudit {
    pub beta: f64,
    pub delta: f64,
    pub t1: f64,
    pub t2: f64,
    #[serde(rename = "trace_M")]
    pub trace_m: f64,
    #[serde(rename = "inner_Z_Pperp")]
    pub inner_z_pperp: f64,
    pub ratio: f64,
    pub checks: Verification,
}

impl CertificateAudit {
    pub fn new(cert: &DualCertificate, checks: Verification) -> Self {
        CertificateAudit {
            beta: cert.beta,
            delta: cert.delta,
            t1: cert.t1,
            t2: cert.t2,
            trace_m: cert.trace_m,
            inner_z_pperp: cert.inner_z_pperp,
            ratio: cert.ratio,
            checks,
        }
    }
}
