//! Finite-difference check of the Riemannian gradient and Hessian along a
//! random tangent direction.

use bmcert::instances::gaussian_z2;
use bmcert::landscape::{energy, hessian_quadratic_form, riemannian_gradient};
use bmcert::manifold::{random_configuration, random_tangent, retract};
use bmcert::rng::seeded;

fn main() -> bmcert::Result<()> {
    let (n, p) = (25, 3);
    let l = gaussian_z2(n, 1.0, 2)?.laplacian()?;
    let v = random_configuration(n, p, 5);
    let dv = random_tangent(&mut seeded(6), &v);
    let dv = dv.scaled(1.0 / dv.norm());

    let f0 = energy(&l, &v)?;
    let slope = riemannian_gradient(&l, &v)?.inner(&dv);
    let curv = hessian_quadratic_form(&l, &v, dv.as_mat())?;
    println!("directional derivative {slope:.8}, curvature {curv:.8}");
    println!("{:>8} {:>14} {:>14}", "t", "first order", "second order");
    for k in 1..=6 {
        let t = 10f64.powi(-k);
        let ft = energy(&l, &retract(&v, &dv, t)?)?;
        let e1 = (ft - f0 - t * slope).abs();
        let e2 = (ft - f0 - t * slope - 0.5 * t * t * curv).abs();
        println!("{t:>8.0e} {e1:>14.3e} {e2:>14.3e}");
    }
    Ok(())
}
