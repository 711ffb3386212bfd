//! The Kuramoto gradient flow `dV/dt = P_T(2 C V)` on `(S^{p-1})^n`, the
//! ascent flow of `E(V) = <C, V V^T>`, and its classical phase form on the
//! circle.
//!
//! Integration is fixed-step RK4 in the ambient space followed by row
//! renormalization. A run is synchronized when the order parameter
//! `r = ||V^T 1|| / n` reaches `1 - sync_tol`.
//!
//! The phase equation `dtheta_i/dt = sum_j C_ij sin(theta_j - theta_i)` moves
//! at exactly half the speed of the `V` flow restricted to `p = 2`: phase time
//! `2t` corresponds to flow time `t`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::kuramoto_coupling;
use crate::manifold::{random_configuration, Configuration};
use crate::rng::derive_seed;
use crate::symlin::{Mat, SymMatrix};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowOptions {
    /// Defaults to `1e-2 / (1 + ||C||)` when unset.
    pub dt: Option<f64>,
    pub t_max: f64,
    pub sync_tol: f64,
    pub sample_every: usize,
    pub seed: u64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            dt: None,
            t_max: 1000.0,
            sync_tol: 1e-6,
            sample_every: 100,
            seed: 0,
        }
    }
}

impl FlowOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadParameter(m));
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return bad(format!("t_max must be positive, got {}", self.t_max));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || dt >= self.t_max {
                return bad(format!("dt must lie in (0, t_max), got {dt}"));
            }
        }
        if !(self.sync_tol > 0.0 && self.sync_tol < 1.0) {
            return bad(format!("sync_tol must lie in (0, 1), got {}", self.sync_tol));
        }
        if self.sample_every == 0 {
            return bad("sample_every must be >= 1".into());
        }
        Ok(())
    }

    fn step_size(&self, c: &SymMatrix) -> Result<f64> {
        match self.dt {
            Some(dt) => Ok(dt),
            None => Ok(1e-2 / (1.0 + c.spectral_norm()?)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub order_parameter: Vec<f64>,
    pub energy: Vec<f64>,
    pub synchronized: bool,
    /// True when the run stopped on the gradient criterion before `t_max`.
    pub converged: bool,
    pub final_grad_norm: f64,
    pub v_final: Configuration,
    /// Allowed energy decrease between consecutive samples.
    pub energy_slack: f64,
}

impl Trajectory {
    pub fn final_order_parameter(&self) -> f64 {
        *self.order_parameter.last().expect("trajectory has samples")
    }

    pub fn energy_monotone(&self) -> bool {
        self.energy
            .windows(2)
            .all(|w| w[1] >= w[0] - self.energy_slack)
    }

    /// Columns `time,order_parameter,energy`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time,order_parameter,energy\n");
        for ((t, r), e) in self.times.iter().zip(&self.order_parameter).zip(&self.energy) {
            out.push_str(&format!("{t:?},{r:?},{e:?}\n"));
        }
        out
    }
}

/// `P_T(2 C V)` and `<C, V V^T>` at once.
fn field_and_energy(c: &SymMatrix, v: &Mat) -> (Mat, f64) {
    let cv = c.mul_mat(v).expect("shapes checked by caller");
    let (n, p) = v.shape();
    let mut f = Mat::zeros(n, p);
    let mut e = 0.0;
    for i in 0..n {
        let vi = v.row(i);
        let ci = cv.row(i);
        let s: f64 = vi.iter().zip(ci).map(|(a, b)| a * b).sum();
        let nn: f64 = vi.iter().map(|a| a * a).sum();
        e += s;
        for (o, (&a, &b)) in f.row_mut(i).iter_mut().zip(vi.iter().zip(ci)) {
            *o = 2.0 * (b - s / nn * a);
        }
    }
    (f, e)
}

fn normalize_rows(v: &mut Mat) -> Result<()> {
    for i in 0..v.rows() {
        let r = v.row(i).iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(r > 1e-14) || !r.is_finite() {
            return Err(Error::DegenerateRow { row: i, norm: r });
        }
        v.row_mut(i).iter_mut().for_each(|a| *a /= r);
    }
    Ok(())
}

fn order_parameter(v: &Mat) -> f64 {
    let s = v.col_sums();
    s.iter().map(|a| a * a).sum::<f64>().sqrt() / v.rows() as f64
}

struct Recorder {
    times: Vec<f64>,
    order_parameter: Vec<f64>,
    energy: Vec<f64>,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            times: Vec::new(),
            order_parameter: Vec::new(),
            energy: Vec::new(),
        }
    }

    fn push(&mut self, t: f64, r: f64, e: f64) {
        self.times.push(t);
        self.order_parameter.push(r);
        self.energy.push(e);
    }
}

/// Integrates the ascent flow from `v0`.
pub fn flow(c: &SymMatrix, v0: &Configuration, opts: &FlowOptions) -> Result<Trajectory> {
    opts.validate()?;
    let n = c.n();
    if v0.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "configuration has {} rows for an {n}x{n} coupling",
            v0.n()
        )));
    }
    let dt = opts.step_size(c)?;
    let grad_tol = 1e-8 * n as f64;
    let slack = 1e-8 * c.inf_norm().max(1.0) * n as f64 * opts.sample_every as f64;
    let mut v = v0.as_mat().clone();
    let mut rec = Recorder::new();
    let mut t = 0.0;
    let mut step = 0usize;
    let (mut k1, mut e) = field_and_energy(c, &v);
    let mut r = order_parameter(&v);
    rec.push(t, r, e);
    let mut converged = false;
    loop {
        let grad = k1.frobenius_norm();
        if r >= 1.0 - opts.sync_tol && grad <= grad_tol {
            converged = true;
            break;
        }
        if t >= opts.t_max {
            break;
        }
        let h = dt.min(opts.t_max - t);
        let k2 = field_and_energy(c, &v.add_scaled(h / 2.0, &k1)).0;
        let k3 = field_and_energy(c, &v.add_scaled(h / 2.0, &k2)).0;
        let k4 = field_and_energy(c, &v.add_scaled(h, &k3)).0;
        let slice = v.as_mut_slice();
        for (idx, x) in slice.iter_mut().enumerate() {
            let d = k1.as_slice()[idx] + 2.0 * k2.as_slice()[idx] + 2.0 * k3.as_slice()[idx] + k4.as_slice()[idx];
            *x += h / 6.0 * d;
        }
        normalize_rows(&mut v)?;
        t += h;
        step += 1;
        (k1, e) = field_and_energy(c, &v);
        r = order_parameter(&v);
        if step % opts.sample_every == 0 {
            rec.push(t, r, e);
        }
    }
    if rec.times.last() != Some(&t) {
        rec.push(t, r, e);
    }
    Ok(Trajectory {
        synchronized: r >= 1.0 - opts.sync_tol,
        converged,
        final_grad_norm: k1.frobenius_norm(),
        v_final: Configuration::new(v)?,
        energy_slack: slack,
        times: rec.times,
        order_parameter: rec.order_parameter,
        energy: rec.energy,
    })
}

/// `dtheta_i/dt = sum_j C_ij sin(theta_j - theta_i)`, with `E` and `r` as
/// functions of the embedding.
fn phase_field(c: &SymMatrix, theta: &[f64]) -> (Vec<f64>, f64, f64) {
    let cs: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
    let sn: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
    let ccs = c.mul_vec(&cs);
    let csn = c.mul_vec(&sn);
    let d = (0..theta.len())
        .map(|i| cs[i] * csn[i] - sn[i] * ccs[i])
        .collect();
    let e = cs.iter().zip(&ccs).map(|(a, b)| a * b).sum::<f64>()
        + sn.iter().zip(&csn).map(|(a, b)| a * b).sum::<f64>();
    let n = theta.len() as f64;
    let r = (cs.iter().sum::<f64>().powi(2) + sn.iter().sum::<f64>().powi(2)).sqrt() / n;
    (d, e, r)
}

/// The classical phase dynamics. Reported through `V_i = (cos, sin)`; the
/// gradient norm is that of the equivalent `V` field, `2 ||dtheta/dt||`.
pub fn flow_phases(c: &SymMatrix, theta0: &[f64], opts: &FlowOptions) -> Result<Trajectory> {
    opts.validate()?;
    let n = c.n();
    if theta0.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} phases for an {n}x{n} coupling",
            theta0.len()
        )));
    }
    let dt = opts.step_size(c)?;
    let grad_tol = 1e-8 * n as f64;
    let slack = 1e-8 * c.inf_norm().max(1.0) * n as f64 * opts.sample_every as f64;
    let mut th = theta0.to_vec();
    let mut rec = Recorder::new();
    let mut t = 0.0;
    let mut step = 0usize;
    let (mut k1, mut e, mut r) = phase_field(c, &th);
    rec.push(t, r, e);
    let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let shifted = |th: &[f64], k: &[f64], h: f64| -> Vec<f64> {
        th.iter().zip(k).map(|(a, b)| a + h * b).collect()
    };
    let mut converged = false;
    loop {
        if r >= 1.0 - opts.sync_tol && 2.0 * norm(&k1) <= grad_tol {
            converged = true;
            break;
        }
        if t >= opts.t_max {
            break;
        }
        let h = dt.min(opts.t_max - t);
        let k2 = phase_field(c, &shifted(&th, &k1, h / 2.0)).0;
        let k3 = phase_field(c, &shifted(&th, &k2, h / 2.0)).0;
        let k4 = phase_field(c, &shifted(&th, &k3, h)).0;
        for i in 0..n {
            th[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
        step += 1;
        (k1, e, r) = phase_field(c, &th);
        if step % opts.sample_every == 0 {
            rec.push(t, r, e);
        }
    }
    if rec.times.last() != Some(&t) {
        rec.push(t, r, e);
    }
    Ok(Trajectory {
        synchronized: r >= 1.0 - opts.sync_tol,
        converged,
        final_grad_norm: 2.0 * norm(&k1),
        v_final: phases_to_configuration(&th),
        energy_slack: slack,
        times: rec.times,
        order_parameter: rec.order_parameter,
        energy: rec.energy,
    })
}

/// `V_i = (cos theta_i, sin theta_i)`.
pub fn phases_to_configuration(theta: &[f64]) -> Configuration {
    let v = Mat::from_fn(theta.len(), 2, |i, k| if k == 0 { theta[i].cos() } else { theta[i].sin() });
    Configuration::new(v).expect("unit rows")
}

/// Outcome of one trial of [`synchronization_experiment`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub synchronized: bool,
    pub converged: bool,
    pub final_order_parameter: f64,
    pub energy_monotone: bool,
}

/// Runs `trials` independent (coupling, initial condition) draws in parallel.
/// Trial `k` uses coupling seed `derive_seed(seed, [k, 0])` and initial seed
/// `derive_seed(seed, [k, 1])`.
pub fn synchronization_trials(
    n: usize,
    alpha: f64,
    p: usize,
    trials: usize,
    opts: &FlowOptions,
    seed: u64,
) -> Result<Vec<TrialOutcome>> {
    if p < 1 {
        return Err(Error::BadParameter("p must be >= 1".into()));
    }
    opts.validate()?;
    (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let inst = kuramoto_coupling(n, alpha, derive_seed(seed, &[k, 0]))?;
            let v0 = random_configuration(n, p, derive_seed(seed, &[k, 1]));
            let tr = flow(&inst.c, &v0, opts)?;
            Ok(TrialOutcome {
                synchronized: tr.synchronized,
                converged: tr.converged,
                final_order_parameter: tr.final_order_parameter(),
                energy_monotone: tr.energy_monotone(),
            })
        })
        .collect()
}

/// Fraction of synchronized trials.
pub fn synchronization_experiment(
    n: usize,
    alpha: f64,
    p: usize,
    trials: usize,
    opts: &FlowOptions,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::BadParameter("trials must be >= 1".into()));
    }
    let out = synchronization_trials(n, alpha, p, trials, opts, seed)?;
    Ok(out.iter().filter(|o| o.synchronized).count() as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{build_laplacian, classify_point, Tolerances};

    fn complete(n: usize) -> SymMatrix {
        SymMatrix::from_upper(n, |i, j| if i == j { 0.0 } else { 1.0 })
    }

    #[test]
    fn all_attractive_synchronizes() {
        let c = complete(50);
        let v0 = random_configuration(50, 2, 7);
        let tr = flow(&c, &v0, &FlowOptions::default()).unwrap();
        assert!(tr.synchronized && tr.converged);
        assert!(tr.final_order_parameter() >= 1.0 - 1e-6);
        assert!(tr.energy_monotone());
    }

    #[test]
    fn synchronized_start_is_fixed() {
        let c = kuramoto_coupling(20, 0.2, 1).unwrap().c;
        let v0 = Configuration::synchronized(20, &[0.6, 0.8]).unwrap();
        let tr = flow(&c, &v0, &FlowOptions::default()).unwrap();
        assert!(tr.synchronized);
        assert_eq!(tr.times, vec![0.0]);
    }

    #[test]
    fn phase_derivative_by_hand() {
        let c = SymMatrix::from_upper(2, |i, j| if i == j { 0.0 } else { 1.0 });
        let (d, _, _) = phase_field(&c, &[0.0, std::f64::consts::FRAC_PI_2]);
        assert!((d[0] - 1.0).abs() < 1e-15);
        assert!((d[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_phases_are_stationary() {
        let c = kuramoto_coupling(10, 0.3, 2).unwrap().c;
        let opts = FlowOptions {
            t_max: 1.0,
            ..FlowOptions::default()
        };
        let tr = flow_phases(&c, &[0.4; 10], &opts).unwrap();
        assert!(tr.synchronized);
        assert!((tr.final_order_parameter() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_and_vector_flows_agree() {
        let n = 12;
        let c = kuramoto_coupling(n, 0.2, 3).unwrap().c;
        let theta: Vec<f64> = (0..n).map(|i| 0.5 * i as f64 + 0.1 * (i * i) as f64).collect();
        let v0 = phases_to_configuration(&theta);
        let dt = 1e-3;
        let a = flow(
            &c,
            &v0,
            &FlowOptions {
                dt: Some(dt),
                t_max: 5.0,
                sample_every: 50,
                sync_tol: 1e-15,
                seed: 0,
            },
        )
        .unwrap();
        let b = flow_phases(
            &c,
            &theta,
            &FlowOptions {
                dt: Some(2.0 * dt),
                t_max: 10.0,
                sample_every: 50,
                sync_tol: 1e-15,
                seed: 0,
            },
        )
        .unwrap();
        assert_eq!(a.times.len(), b.times.len());
        for (ra, rb) in a.order_parameter.iter().zip(&b.order_parameter) {
            assert!((ra - rb).abs() <= 1e-6, "{ra} vs {rb}");
        }
    }

    #[test]
    fn energy_monotone_on_kuramoto_couplings() {
        for seed in 0..10 {
            let c = kuramoto_coupling(100, 0.1, seed).unwrap().c;
            let v0 = random_configuration(100, 2, 100 + seed);
            let opts = FlowOptions {
                t_max: 2.0,
                ..FlowOptions::default()
            };
            let tr = flow(&c, &v0, &opts).unwrap();
            assert!(tr.energy_monotone(), "seed {seed}");
            assert!(tr.v_final.as_mat().to_rows().iter().all(|r| {
                (r.iter().map(|a| a * a).sum::<f64>().sqrt() - 1.0).abs() <= 1e-10
            }));
        }
    }

    #[test]
    fn stationary_points_are_first_order() {
        let inst = kuramoto_coupling(40, 0.1, 5).unwrap();
        let v0 = random_configuration(40, 2, 6);
        let tr = flow(&inst.c, &v0, &FlowOptions::default()).unwrap();
        assert!(tr.converged);
        let l = build_laplacian(&inst.c, &inst.x).unwrap();
        let rep = classify_point(&l, &tr.v_final, &Tolerances::for_laplacian(&l, 2)).unwrap();
        assert!(rep.is_first_order);
    }

    #[test]
    fn noiseless_experiment() {
        let rate = synchronization_experiment(100, 0.0, 2, 10, &FlowOptions::default(), 1).unwrap();
        assert_eq!(rate, 1.0);
    }

    #[test]
    fn invalid_options() {
        let c = complete(4);
        let v0 = random_configuration(4, 2, 0);
        for opts in [
            FlowOptions { dt: Some(0.0), ..FlowOptions::default() },
            FlowOptions { dt: Some(2.0), t_max: 1.0, ..FlowOptions::default() },
            FlowOptions { sample_every: 0, ..FlowOptions::default() },
        ] {
            assert!(matches!(flow(&c, &v0, &opts), Err(Error::BadParameter(_))));
        }
    }
}
