//! Monte Carlo success rate of the spectral certificate across noise levels,
//! printed as CSV next to the asymptotic threshold.

use bmcert::harness::{run_phase, Criterion, PhaseConfig, PhaseModel};

fn main() -> bmcert::Result<()> {
    let (n, p) = (60, 2);
    let tau = PhaseModel::GaussianZ2.threshold(n, p, 0.01);
    let grid: Vec<f64> = (1..=8).map(|k| 0.25 * k as f64 * tau).collect();
    let mut cfg = PhaseConfig::new(PhaseModel::GaussianZ2, n, p, grid, 20, Criterion::BenignCertified);
    cfg.seed = 1;
    print!("{}", run_phase(&cfg)?.to_csv());

    let cfg = PhaseConfig::new(PhaseModel::BernoulliZ2, n, 3, vec![0.4, 0.6, 0.8, 1.0], 20, Criterion::SolverGlobal);
    print!("{}", run_phase(&cfg)?.to_csv());
    Ok(())
}
