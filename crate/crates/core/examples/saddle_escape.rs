//! A saddle point is detected by its negative curvature and left along the
//! corresponding eigendirection.

use bmcert::instances::gaussian_z2;
use bmcert::landscape::{classify_point, energy, Tolerances};
use bmcert::manifold::{retract, Configuration};
use bmcert::Mat;
use bmcert::solver::{escape_direction, solve, SolverOptions};

fn main() -> bmcert::Result<()> {
    let n = 30;
    let l = gaussian_z2(n, 0.2, 3)?.laplacian()?;
    // Every sign configuration is first-order critical; flipping one row of
    // the optimum gives a saddle.
    let rows = Mat::from_fn(n, 2, |i, j| match (i, j) {
        (0, 0) => -1.0,
        (_, 0) => 1.0,
        _ => 0.0,
    });
    let saddle = Configuration::new(rows)?.flip_rows(l.x());
    let tols = Tolerances::for_laplacian(&l, 2);
    let rep = classify_point(&l, &saddle, &tols)?;
    println!(
        "saddle: energy={:.4} grad={:.1e} min_hess={:.4}",
        rep.energy, rep.grad_norm, rep.min_hess_eig
    );

    if let Some((dir, curv)) = escape_direction(&l, &saddle, tols.hess_tol)? {
        println!("escape curvature {curv:.4}");
        for t in [1e-3, 1e-2, 1e-1] {
            let e = energy(&l, &retract(&saddle, &dir, t)?)?;
            println!("  t={t:<6} energy change {:.3e}", e - rep.energy);
        }
    }

    let res = solve(&l, &saddle, &SolverOptions::default())?;
    println!(
        "solver from the saddle: escapes={} energy={:.2e} global={}",
        res.escapes_taken, res.report.energy, res.report.is_global
    );
    Ok(())
}
