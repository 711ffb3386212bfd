//! Riemannian gradient descent with Armijo backtracking, switching to a
//! negative-curvature line search whenever the gradient is small but the
//! tangent Hessian still has a negative eigenvalue. Terminates at numerical
//! second-order critical points.

use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::landscape::{
    assemble_report, energy, min_curvature, riemannian_gradient, CriticalityReport, Laplacian,
    Tolerances,
};
use crate::manifold::{retract, Configuration, TangentVector};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverOptions {
    pub max_iters: usize,
    /// Defaults to `1e-8 max(1,||L||) sqrt(np)` when `None`.
    pub grad_tol: Option<f64>,
    /// Defaults to `1e-8 max(1,||L||)` when `None`.
    pub hess_tol: Option<f64>,
    pub opt_tol: f64,
    pub armijo_c: f64,
    pub backtrack_factor: f64,
    /// First trial step of the curvature line search.
    pub escape_step: f64,
    /// Breaks ties between the two signs of an escape direction.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iters: 10_000,
            grad_tol: None,
            hess_tol: None,
            opt_tol: 1e-6,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
            escape_step: 0.5,
            seed: 0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::BadParameter(msg.into()));
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return bad("armijo_c must lie in (0, 1)");
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return bad("backtrack_factor must lie in (0, 1)");
        }
        if !(self.escape_step > 0.0) {
            return bad("escape_step must be positive");
        }
        for tol in [self.grad_tol, self.hess_tol].into_iter().flatten() {
            if !(tol >= 0.0) {
                return bad("tolerances must be non-negative");
            }
        }
        if !(self.opt_tol >= 0.0) {
            return bad("opt_tol must be non-negative");
        }
        Ok(())
    }

    pub fn tolerances(&self, l: &Laplacian, p: usize) -> Tolerances {
        let d = Tolerances::for_laplacian(l, p);
        Tolerances {
            grad_tol: self.grad_tol.unwrap_or(d.grad_tol),
            hess_tol: self.hess_tol.unwrap_or(d.hess_tol),
            opt_tol: self.opt_tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    /// Both tolerances met.
    Converged,
    /// `max_iters` exhausted.
    Timeout,
    /// No step along the gradient or the escape direction decreased the energy.
    Stalled,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub v_final: Configuration,
    pub report: CriticalityReport,
    pub status: SolveStatus,
    pub outer_iters: usize,
    pub escapes_taken: usize,
    /// Energy at the start and after every accepted step.
    pub energy_trace: Vec<f64>,
}

impl SolveReport {
    pub fn timed_out(&self) -> bool {
        self.status == SolveStatus::Timeout
    }
}

/// Most negative curvature direction of the tangent Hessian at `V`, as a
/// unit-norm tangent matrix, when that curvature is below `-hess_tol`.
pub fn escape_direction(
    l: &Laplacian,
    v: &Configuration,
    hess_tol: f64,
) -> Result<Option<(TangentVector, f64)>> {
    let (curvature, dir) = min_curvature(l, v)?;
    Ok(match dir {
        Some(d) if curvature < -hess_tol => Some((TangentVector::new_unchecked(d), curvature)),
        _ => None,
    })
}

const MAX_BACKTRACKS: usize = 80;

/// Runs descent from `v0` until a numerical second-order critical point.
pub fn solve(l: &Laplacian, v0: &Configuration, opts: &SolverOptions) -> Result<SolveReport> {
    opts.validate()?;
    if v0.n() != l.n() {
        return Err(Error::DimensionMismatch(format!(
            "initial point has {} rows, Laplacian is {}x{}",
            v0.n(),
            l.n(),
            l.n()
        )));
    }
    let tols = opts.tolerances(l, v0.p());
    let mut tie_rng = rng::seeded(opts.seed);
    let step0 = 1.0 / (2.0 * l.norm() + 1.0);

    let mut v = v0.clone();
    let mut f = energy(l, &v)?;
    let mut trace = vec![f];
    let mut escapes = 0;

    let finish = |v: Configuration, grad_norm: f64, curvature: f64, status, iters, escapes, trace| {
        let report = assemble_report(l, &v, &tols, grad_norm, curvature);
        SolveReport {
            v_final: v,
            report,
            status,
            outer_iters: iters,
            escapes_taken: escapes,
            energy_trace: trace,
        }
    };

    for iter in 0..opts.max_iters {
        let g = riemannian_gradient(l, &v)?;
        let gn = g.norm();

        if gn <= tols.grad_tol {
            let (curvature, dir) = min_curvature(l, &v)?;
            let dir = match dir {
                Some(d) if curvature < -tols.hess_tol => TangentVector::new_unchecked(d),
                _ => return Ok(finish(v, gn, curvature, SolveStatus::Converged, iter, escapes, trace)),
            };
            match curvature_step(l, &v, f, &dir, curvature, opts, &mut tie_rng)? {
                Some((next, fnext)) => {
                    v = next;
                    f = fnext;
                    escapes += 1;
                }
                None => return Ok(finish(v, gn, curvature, SolveStatus::Stalled, iter, escapes, trace)),
            }
        } else {
            let mut t = step0;
            let mut accepted = None;
            for _ in 0..MAX_BACKTRACKS {
                let cand = retract(&v, &g, -t)?;
                let fc = energy(l, &cand)?;
                if fc <= f - opts.armijo_c * t * gn * gn {
                    accepted = Some((cand, fc));
                    break;
                }
                t *= opts.backtrack_factor;
            }
            match accepted {
                Some((next, fnext)) => {
                    v = next;
                    f = fnext;
                }
                None => {
                    let (curvature, _) = min_curvature(l, &v)?;
                    return Ok(finish(v, gn, curvature, SolveStatus::Stalled, iter, escapes, trace));
                }
            }
        }
        trace.push(f);
    }

    let gn = riemannian_gradient(l, &v)?.norm();
    let (curvature, _) = min_curvature(l, &v)?;
    let status = if gn <= tols.grad_tol && curvature >= -tols.hess_tol {
        SolveStatus::Converged
    } else {
        SolveStatus::Timeout
    };
    Ok(finish(v, gn, curvature, status, opts.max_iters, escapes, trace))
}

/// Backtracking along `+dir` and `-dir`, keeping the better sign, until the
/// second-order sufficient decrease `f + c t^2 curvature / 2` is met.
fn curvature_step(
    l: &Laplacian,
    v: &Configuration,
    f: f64,
    dir: &TangentVector,
    curvature: f64,
    opts: &SolverOptions,
    tie_rng: &mut rng::Rng,
) -> Result<Option<(Configuration, f64)>> {
    let mut t = opts.escape_step;
    for _ in 0..MAX_BACKTRACKS {
        let plus = retract(v, dir, t)?;
        let minus = retract(v, dir, -t)?;
        let fp = energy(l, &plus)?;
        let fm = energy(l, &minus)?;
        let take_plus = if fp == fm { tie_rng.random::<bool>() } else { fp < fm };
        let (cand, fc) = if take_plus { (plus, fp) } else { (minus, fm) };
        if fc <= f + 0.5 * opts.armijo_c * t * t * curvature {
            return Ok(Some((cand, fc)));
        }
        t *= opts.backtrack_factor;
    }
    Ok(None)
}
