//! Experiment orchestration: corollary thresholds, Monte Carlo phase sweeps,
//! certificate audits and the records written by the `bmcert` command line.

pub mod cli;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::certificate::{
    build_certificate, build_ling_certificate, certified_cond_lower_bound, verify_certificate,
    CertificateAudit, CertifiedBound,
};
use crate::error::{Error, Result};
use crate::instances::{bernoulli_z2, gaussian_z2, kuramoto_coupling, Instance};
use crate::kuramoto::{flow, FlowOptions};
use crate::landscape::{classify_point, theorem1_verdict, CriticalityReport, Laplacian, Theorem1Verdict, Tolerances};
use crate::manifold::{align_columns, random_configuration, Configuration};
use crate::rng::derive_seed;
use crate::solver::{solve, SolverOptions};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default slack in the corollary thresholds.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Gaussian noise level below which the landscape is benign with high
/// probability: `((p-1)/(p+1)) sqrt(n / ((2+eps) log n))`.
pub fn gaussian_threshold(n: usize, p: usize, epsilon: f64) -> f64 {
    let (n, p) = (n as f64, p as f64);
    (p - 1.0) / (p + 1.0) * (n / ((2.0 + epsilon) * n.ln())).sqrt()
}

/// Bernoulli bias above which the landscape is benign with high probability:
/// `((p+1)/(p-1)) sqrt((2+eps) log n / n)`.
pub fn bernoulli_threshold(n: usize, p: usize, epsilon: f64) -> f64 {
    let (n, p) = (n as f64, p as f64);
    (p + 1.0) / (p - 1.0) * ((2.0 + epsilon) * n.ln() / n).sqrt()
}

/// Repulsion probability below which Kuramoto oscillators synchronize with
/// high probability: `1/2 - ((p+1)/(2(p-1))) sqrt((2+eps) log n / n)`.
pub fn kuramoto_threshold(n: usize, p: usize, epsilon: f64) -> f64 {
    0.5 - bernoulli_threshold(n, p, epsilon) / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum PhaseModel {
    GaussianZ2,
    BernoulliZ2,
    Kuramoto,
}

impl PhaseModel {
    pub fn instance(self, n: usize, param: f64, seed: u64) -> Result<Instance> {
        match self {
            PhaseModel::GaussianZ2 => gaussian_z2(n, param, seed),
            PhaseModel::BernoulliZ2 => bernoulli_z2(n, param, seed),
            PhaseModel::Kuramoto => kuramoto_coupling(n, param, seed),
        }
    }

    pub fn threshold(self, n: usize, p: usize, epsilon: f64) -> f64 {
        match self {
            PhaseModel::GaussianZ2 => gaussian_threshold(n, p, epsilon),
            PhaseModel::BernoulliZ2 => bernoulli_threshold(n, p, epsilon),
            PhaseModel::Kuramoto => kuramoto_threshold(n, p, epsilon),
        }
    }

    pub fn param_name(self) -> &'static str {
        match self {
            PhaseModel::GaussianZ2 => "sigma",
            PhaseModel::BernoulliZ2 => "delta",
            PhaseModel::Kuramoto => "alpha",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum Criterion {
    /// The spectral test `p > lambda_n / lambda_2` passes.
    BenignCertified,
    /// Descent from a random start ends at the global optimum.
    SolverGlobal,
    /// The Kuramoto flow from a random start synchronizes.
    Synchronized,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseConfig {
    pub model: PhaseModel,
    pub n: usize,
    pub p: usize,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub criterion: Criterion,
    pub seed: u64,
    pub epsilon: f64,
    pub solver: SolverOptions,
    pub flow: FlowOptions,
}

impl PhaseConfig {
    pub fn new(model: PhaseModel, n: usize, p: usize, grid: Vec<f64>, trials: usize, criterion: Criterion) -> Self {
        PhaseConfig {
            model,
            n,
            p,
            grid,
            trials,
            criterion,
            seed: 0,
            epsilon: DEFAULT_EPSILON,
            solver: SolverOptions::default(),
            flow: FlowOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseResult {
    pub model: PhaseModel,
    pub parameter: &'static str,
    pub grid: Vec<f64>,
    pub p: usize,
    pub n: usize,
    pub trials: usize,
    pub successes: Vec<usize>,
    pub success_rate: Vec<f64>,
    pub criterion: Criterion,
    pub seed: u64,
    pub epsilon: f64,
    pub threshold: f64,
}

impl PhaseResult {
    /// One row per grid value; the threshold is repeated on every row.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},success_rate,successes,trials,threshold\n", self.parameter);
        for ((g, r), s) in self.grid.iter().zip(&self.success_rate).zip(&self.successes) {
            out.push_str(&format!("{g:?},{r:?},{s},{},{:?}\n", self.trials, self.threshold));
        }
        out
    }
}

/// Evaluates one (instance, initialization) draw under `criterion`.
pub fn trial_success(
    inst: &Instance,
    p: usize,
    criterion: Criterion,
    init_seed: u64,
    solver: &SolverOptions,
    flow_opts: &FlowOptions,
) -> Result<bool> {
    match criterion {
        Criterion::BenignCertified => {
            let l = inst.laplacian()?;
            Ok(theorem1_verdict(&l, p) == Theorem1Verdict::BenignCertified)
        }
        Criterion::SolverGlobal => {
            let l = inst.laplacian()?;
            let v0 = random_configuration(inst.n(), p, init_seed);
            let opts = SolverOptions {
                seed: init_seed,
                ..solver.clone()
            };
            Ok(solve(&l, &v0, &opts)?.report.is_global)
        }
        Criterion::Synchronized => {
            let v0 = random_configuration(inst.n(), p, init_seed);
            Ok(flow(&inst.canonical().c, &v0, flow_opts)?.synchronized)
        }
    }
}

/// Success fraction per grid value. Trial `k` at grid index `g` draws its
/// instance from `derive_seed(seed, [g, k, 0])` and its initialization from
/// `derive_seed(seed, [g, k, 1])`, so results do not depend on scheduling.
pub fn run_phase(cfg: &PhaseConfig) -> Result<PhaseResult> {
    if cfg.trials == 0 {
        return Err(Error::BadParameter("trials must be >= 1".into()));
    }
    if cfg.grid.is_empty() || cfg.grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::BadParameter("grid must be non-empty and sorted".into()));
    }
    if cfg.p < 2 {
        return Err(Error::BadParameter("phase experiments need p >= 2".into()));
    }
    if !(cfg.epsilon > 0.0) {
        return Err(Error::BadParameter("epsilon must be positive".into()));
    }
    cfg.solver.validate()?;
    cfg.flow.validate()?;
    let jobs: Vec<(usize, usize)> = (0..cfg.grid.len())
        .flat_map(|g| (0..cfg.trials).map(move |k| (g, k)))
        .collect();
    let outcomes: Vec<bool> = jobs
        .par_iter()
        .map(|&(g, k)| {
            let inst = cfg
                .model
                .instance(cfg.n, cfg.grid[g], derive_seed(cfg.seed, &[g as u64, k as u64, 0]))?;
            trial_success(
                &inst,
                cfg.p,
                cfg.criterion,
                derive_seed(cfg.seed, &[g as u64, k as u64, 1]),
                &cfg.solver,
                &cfg.flow,
            )
        })
        .collect::<Result<_>>()?;
    let successes: Vec<usize> = outcomes
        .chunks(cfg.trials)
        .map(|c| c.iter().filter(|&&s| s).count())
        .collect();
    Ok(PhaseResult {
        model: cfg.model,
        parameter: cfg.model.param_name(),
        grid: cfg.grid.clone(),
        p: cfg.p,
        n: cfg.n,
        trials: cfg.trials,
        success_rate: successes.iter().map(|&s| s as f64 / cfg.trials as f64).collect(),
        successes,
        criterion: cfg.criterion,
        seed: cfg.seed,
        epsilon: cfg.epsilon,
        threshold: cfg.model.threshold(cfg.n, cfg.p, cfg.epsilon),
    })
}

/// Ratio and trace of the older certificate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LingSummary {
    pub ratio: f64,
    #[serde(rename = "trace_M")]
    pub trace_m: f64,
    #[serde(rename = "inner_Z_Pperp")]
    pub inner_z_pperp: f64,
}

/// Everything `certify` reports about a configuration.
#[derive(Clone, Debug, Serialize)]
pub struct FullAudit {
    pub n: usize,
    pub p: usize,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub condition_number: f64,
    pub theorem1_verdict: Theorem1Verdict,
    pub criticality: CriticalityReport,
    #[serde(flatten)]
    pub certificate: CertificateAudit,
    pub all_checks_pass: bool,
    pub ling: LingSummary,
    pub bound: Option<CertifiedBound>,
    pub bound_error: Option<String>,
}

/// Moves to the canonical frame, aligns `V`, builds both certificates,
/// verifies the constructive one and evaluates the bounding chain. Chain and
/// criticality failures are recorded in `bound_error`; construction failures
/// are returned.
pub fn audit_configuration(l: &Laplacian, v: &Configuration) -> Result<FullAudit> {
    if v.n() != l.n() {
        return Err(Error::DimensionMismatch(format!(
            "configuration has {} rows for n = {}",
            v.n(),
            l.n()
        )));
    }
    let p = v.p();
    let v = v.flip_rows(l.x());
    let l = l.canonical();
    let (v, _) = align_columns(&v);
    let criticality = classify_point(&l, &v, &Tolerances::for_laplacian(&l, p))?;
    let cert = build_certificate(&v, p)?;
    let ling = build_ling_certificate(&v, p)?;
    let checks = verify_certificate(&cert, &v);
    let (bound, bound_error) = match certified_cond_lower_bound(&l, &cert, &v) {
        Ok(b) => (Some(b), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(FullAudit {
        n: l.n(),
        p,
        lambda2: l.lambda2(),
        lambda_n: l.lambda_n(),
        condition_number: l.condition_number(),
        theorem1_verdict: theorem1_verdict(&l, p),
        criticality,
        certificate: CertificateAudit::new(&cert, checks),
        all_checks_pass: checks.all_pass(),
        ling: LingSummary {
            ratio: ling.ratio,
            trace_m: ling.trace_m,
            inner_z_pperp: ling.inner_z_pperp,
        },
        bound,
        bound_error,
    })
}

/// Times a closure for a run record.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

/// One per CLI invocation.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
    pub wall_time: f64,
    pub version: &'static str,
    pub exit_code: i32,
    pub error: Option<String>,
    pub summary: serde_json::Value,
}
