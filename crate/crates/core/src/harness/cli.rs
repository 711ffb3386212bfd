//! The `bmcert` command line. Each invocation prints exactly one
//! [`RunRecord`] as a JSON line on stdout (and optionally writes it to
//! `--record`); errors also go to stderr.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{audit_configuration, run_phase, timed, Criterion, PhaseConfig, PhaseModel, RunRecord, DEFAULT_EPSILON, VERSION};
use crate::error::{Error, Result};
use crate::instances::{adversarial, bernoulli_z2, gaussian_z2, kuramoto_coupling, load_instance};
use crate::kuramoto::{flow, FlowOptions};
use crate::landscape::{theorem1_verdict, CriticalityReport, Theorem1Verdict};
use crate::manifold::{random_configuration, Configuration};
use crate::rng::derive_seed;
use crate::solver::{solve, SolveStatus, SolverOptions};
use crate::symlin::parse_floats;

#[derive(Debug, Parser)]
#[command(name = "bmcert", version, about = "Benign-landscape certificates for Burer-Monteiro factorizations")]
pub struct Cli {
    /// Worker threads for parallel trials.
    #[arg(long, env = "BMCERT_JOBS", global = true)]
    pub jobs: Option<usize>,
    /// Also write the run record to this file.
    #[arg(long, global = true)]
    pub record: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random cost matrix.
    Generate(GenerateArgs),
    /// Run descent with saddle escape from a random or given start.
    Solve(SolveArgs),
    /// Audit a configuration: certificates, checks and the bounding chain.
    Certify(CertifyArgs),
    /// Build the tight instance, its trap configuration and their audit.
    Adversarial(AdversarialArgs),
    /// Integrate the Kuramoto flow on random couplings.
    Kuramoto(KuramotoArgs),
    /// Monte Carlo success rates over a parameter grid.
    Phase(PhaseArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum GenModel {
    GaussianZ2,
    BernoulliZ2,
    Kuramoto,
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub model: GenModel,
    #[arg(long)]
    pub n: usize,
    /// sigma, delta or alpha, depending on the model.
    #[arg(long)]
    pub param: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Matrix file; metadata goes to `<out>.meta.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Comma-separated ground-truth signs (defaults to all ones).
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub p: usize,
    /// Starting configuration; random when absent.
    #[arg(long)]
    pub init: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    /// Report JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Final configuration.
    #[arg(long)]
    pub v_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub x: Option<String>,
    /// Configuration to certify; `p` is its column count.
    #[arg(long)]
    pub v: PathBuf,
    /// Audit JSON.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct AdversarialArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    /// Receives `instance.txt`, `v_trap.txt` and `audit.json`.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct KuramotoArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    /// Defaults to `1e-2 / (1 + ||C||)`.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = 1000.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub sample_every: usize,
    /// Trajectory CSV of the first trial.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct PhaseArgs {
    #[arg(long, value_enum)]
    pub model: PhaseModel,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    /// Comma-separated, sorted parameter values.
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, value_enum)]
    pub criterion: Criterion,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Flow horizon for the `synchronized` criterion.
    #[arg(long, default_value_t = 1000.0)]
    pub tmax: f64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// What a subcommand hands back to the record.
#[derive(Debug)]
pub struct Outcome {
    pub outputs: Vec<PathBuf>,
    pub summary: serde_json::Value,
    pub exit_code: i32,
    pub error: Option<String>,
}

impl Outcome {
    fn ok(outputs: Vec<PathBuf>, summary: serde_json::Value) -> Self {
        Outcome {
            outputs,
            summary,
            exit_code: 0,
            error: None,
        }
    }
}

fn parse_signs(x: &Option<String>) -> Result<Option<Vec<f64>>> {
    x.as_deref().map(|s| parse_floats(&s.replace(',', " "))).transpose()
}

fn write(path: &Path, text: &str) -> Result<PathBuf> {
    fs::write(path, text)?;
    Ok(path.to_path_buf())
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<Outcome> {
    let inst = match a.model {
        GenModel::GaussianZ2 => gaussian_z2(a.n, a.param, a.seed)?,
        GenModel::BernoulliZ2 => bernoulli_z2(a.n, a.param, a.seed)?,
        GenModel::Kuramoto => kuramoto_coupling(a.n, a.param, a.seed)?,
    };
    let side = inst.save(&a.out)?;
    Ok(Outcome::ok(vec![a.out.clone(), side], json!({ "n": inst.n() })))
}

#[derive(Serialize)]
struct SolveSummary {
    status: SolveStatus,
    outer_iters: usize,
    escapes_taken: usize,
    report: CriticalityReport,
    theorem1_verdict: Theorem1Verdict,
    condition_number: f64,
    n: usize,
    p: usize,
    energy_trace: Vec<f64>,
}

pub fn cmd_solve(a: &SolveArgs) -> Result<Outcome> {
    let x = parse_signs(&a.x)?;
    let inst = load_instance(&a.instance, x.as_deref())?;
    let l = inst.laplacian()?;
    let v0 = match &a.init {
        Some(path) => Configuration::parse(&fs::read_to_string(path)?)?,
        None => random_configuration(inst.n(), a.p, a.seed),
    };
    if v0.p() != a.p {
        return Err(Error::DimensionMismatch(format!(
            "initial configuration has p = {}, --p is {}",
            v0.p(),
            a.p
        )));
    }
    let opts = SolverOptions {
        max_iters: a.max_iters,
        seed: a.seed,
        ..SolverOptions::default()
    };
    let rep = solve(&l, &v0, &opts)?;
    let summary = SolveSummary {
        status: rep.status,
        outer_iters: rep.outer_iters,
        escapes_taken: rep.escapes_taken,
        report: rep.report,
        theorem1_verdict: theorem1_verdict(&l, a.p),
        condition_number: l.condition_number(),
        n: l.n(),
        p: a.p,
        energy_trace: rep.energy_trace.clone(),
    };
    let mut outputs = vec![write(&a.out, &serde_json::to_string_pretty(&summary)?)?];
    if let Some(path) = &a.v_out {
        outputs.push(write(path, &rep.v_final.to_text())?);
    }
    let brief = json!({
        "status": summary.status,
        "is_global": summary.report.is_global,
        "is_second_order": summary.report.is_second_order,
        "energy": summary.report.energy,
    });
    let mut out = Outcome::ok(outputs, brief);
    if rep.timed_out() {
        out.exit_code = 1;
        out.error = Some(format!("no convergence within {} iterations", a.max_iters));
    }
    Ok(out)
}

fn certify_to(l: &crate::landscape::Laplacian, v: &Configuration, path: &Path) -> Result<Outcome> {
    let audit = audit_configuration(l, v)?;
    let file = write(path, &serde_json::to_string_pretty(&audit)?)?;
    let summary = json!({
        "ratio": audit.certificate.ratio,
        "ling_ratio": audit.ling.ratio,
        "all_checks_pass": audit.all_checks_pass,
        "condition_number": audit.condition_number,
        "bound": audit.bound,
    });
    let mut out = Outcome::ok(vec![file], summary);
    if let Some(e) = audit.bound_error {
        out.exit_code = 1;
        out.error = Some(e);
    }
    Ok(out)
}

pub fn cmd_certify(a: &CertifyArgs) -> Result<Outcome> {
    let x = parse_signs(&a.x)?;
    let inst = load_instance(&a.instance, x.as_deref())?;
    let v = Configuration::parse(&fs::read_to_string(&a.v)?)?;
    certify_to(&inst.laplacian()?, &v, &a.out)
}

pub fn cmd_adversarial(a: &AdversarialArgs) -> Result<Outcome> {
    let adv = adversarial(a.n, a.p)?;
    fs::create_dir_all(&a.out_dir)?;
    let inst_path = a.out_dir.join("instance.txt");
    let side = adv.instance.save(&inst_path)?;
    let v_path = write(&a.out_dir.join("v_trap.txt"), &adv.v_trap.to_text())?;
    let mut out = certify_to(&adv.instance.laplacian()?, &adv.v_trap, &a.out_dir.join("audit.json"))?;
    out.outputs.splice(0..0, [inst_path, side, v_path]);
    if let serde_json::Value::Object(m) = &mut out.summary {
        m.insert("residuals".into(), serde_json::to_value(adv.residuals())?);
    }
    Ok(out)
}

pub fn cmd_kuramoto(a: &KuramotoArgs) -> Result<Outcome> {
    if a.trials == 0 {
        return Err(Error::BadParameter("trials must be >= 1".into()));
    }
    let opts = FlowOptions {
        dt: a.dt,
        t_max: a.tmax,
        sample_every: a.sample_every,
        seed: a.seed,
        ..FlowOptions::default()
    };
    opts.validate()?;
    // Same seed layout as `synchronization_trials`.
    let runs = (0..a.trials as u64)
        .into_par_iter()
        .map(|k| {
            let inst = kuramoto_coupling(a.n, a.alpha, derive_seed(a.seed, &[k, 0]))?;
            let v0 = random_configuration(a.n, a.p, derive_seed(a.seed, &[k, 1]));
            flow(&inst.c, &v0, &opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let file = write(&a.out, &runs[0].to_csv())?;
    let synced = runs.iter().filter(|t| t.synchronized).count();
    let summary = json!({
        "success_rate": synced as f64 / a.trials as f64,
        "final_order_parameter": runs.iter().map(|t| t.final_order_parameter()).collect::<Vec<_>>(),
        "energy_monotone": runs.iter().all(|t| t.energy_monotone()),
    });
    Ok(Outcome::ok(vec![file], summary))
}

pub fn cmd_phase(a: &PhaseArgs) -> Result<Outcome> {
    let grid = parse_floats(&a.grid.replace(',', " "))?;
    let mut cfg = PhaseConfig::new(a.model, a.n, a.p, grid, a.trials, a.criterion);
    cfg.seed = a.seed;
    cfg.epsilon = a.epsilon;
    cfg.flow.t_max = a.tmax;
    let res = run_phase(&cfg)?;
    let mut outputs = Vec::new();
    if let Some(path) = &a.csv {
        outputs.push(write(path, &res.to_csv())?);
    }
    if let Some(path) = &a.json {
        outputs.push(write(path, &serde_json::to_string_pretty(&res)?)?);
    }
    Ok(Outcome::ok(outputs, serde_json::to_value(&res)?))
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Solve(_) => "solve",
            Command::Certify(_) => "certify",
            Command::Adversarial(_) => "adversarial",
            Command::Kuramoto(_) => "kuramoto",
            Command::Phase(_) => "phase",
        }
    }

    fn config(&self) -> serde_json::Value {
        let v = match self {
            Command::Generate(a) => serde_json::to_value(a),
            Command::Solve(a) => serde_json::to_value(a),
            Command::Certify(a) => serde_json::to_value(a),
            Command::Adversarial(a) => serde_json::to_value(a),
            Command::Kuramoto(a) => serde_json::to_value(a),
            Command::Phase(a) => serde_json::to_value(a),
        };
        v.unwrap_or(serde_json::Value::Null)
    }

    fn execute(&self) -> Result<Outcome> {
        match self {
            Command::Generate(a) => cmd_generate(a),
            Command::Solve(a) => cmd_solve(a),
            Command::Certify(a) => cmd_certify(a),
            Command::Adversarial(a) => cmd_adversarial(a),
            Command::Kuramoto(a) => cmd_kuramoto(a),
            Command::Phase(a) => cmd_phase(a),
        }
    }
}

/// Runs a parsed command line and returns the run record.
pub fn execute(cli: &Cli) -> RunRecord {
    let work = || cli.command.execute();
    let (result, wall_time) = match cli.jobs {
        Some(j) if j > 0 => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => timed(|| pool.install(work)),
            Err(e) => (Err(Error::BadParameter(format!("cannot start {j} workers: {e}"))), 0.0),
        },
        Some(_) => (Err(Error::BadParameter("--jobs must be >= 1".into())), 0.0),
        None => timed(work),
    };
    let (outputs, summary, exit_code, error) = match result {
        Ok(o) => (o.outputs, o.summary, o.exit_code, o.error),
        Err(e) => (Vec::new(), serde_json::Value::Null, e.exit_code(), Some(e.to_string())),
    };
    RunRecord {
        command: cli.command.name().into(),
        config: cli.command.config(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        wall_time,
        version: VERSION,
        exit_code,
        error,
        summary,
    }
}

/// Parses `args`, runs the command, emits the record and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let record = execute(&cli);
    let line = serde_json::to_string(&record).expect("record serializes");
    println!("{line}");
    if let Some(err) = &record.error {
        eprintln!("bmcert {}: {err}", record.command);
    }
    if let Some(path) = &cli.record {
        if let Err(e) = fs::write(path, &line) {
            eprintln!("bmcert: cannot write record to {}: {e}", path.display());
            return 2;
        }
    }
    record.exit_code
}
