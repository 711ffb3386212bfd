//! Noisy Z2 synchronization well below the noise threshold: the spectral
//! test certifies the landscape and descent from a random start recovers the
//! planted signs.

use bmcert::harness::gaussian_threshold;
use bmcert::instances::gaussian_z2;
use bmcert::landscape::theorem1_verdict;
use bmcert::manifold::random_configuration;
use bmcert::solver::{solve, SolverOptions};

fn main() -> bmcert::Result<()> {
    let (n, p) = (120, 3);
    let sigma = 0.3 * gaussian_threshold(n, p, 0.01);
    let inst = gaussian_z2(n, sigma, 7)?;
    let l = inst.laplacian()?;
    println!("n={n} p={p} sigma={sigma:.4}");
    println!("lambda2={:.4} lambda_n={:.4} cond={:.4}", l.lambda2(), l.lambda_n(), l.condition_number());
    println!("verdict: {:?}", theorem1_verdict(&l, p));

    let v0 = random_configuration(n, p, 1);
    let res = solve(&l, &v0, &SolverOptions::default())?;
    println!(
        "status={:?} iters={} energy={:.3e} grad={:.2e} min_hess={:.2e}",
        res.status, res.outer_iters, res.report.energy, res.report.grad_norm, res.report.min_hess_eig
    );
    println!("global: {}", res.report.is_global);
    println!("distance to x x^T: {:.2e}", res.v_final.distance_to_rank_one(l.x()));
    Ok(())
}
