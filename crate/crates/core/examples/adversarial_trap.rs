//! The tight instance: a cost matrix with condition number exactly `p` whose
//! landscape still holds a non-optimal second-order critical point.

use bmcert::instances::adversarial;
use bmcert::landscape::{classify_point, theorem1_verdict, Tolerances};

fn main() -> bmcert::Result<()> {
    for (n, p) in [(12, 2), (18, 3), (24, 4)] {
        let adv = adversarial(n, p)?;
        let l = adv.instance.laplacian()?;
        let rep = classify_point(&l, &adv.v_trap, &Tolerances::for_laplacian(&l, p))?;
        let res = adv.residuals();
        println!(
            "n={n:>3} p={p} cond={:.6} verdict={:?}",
            l.condition_number(),
            theorem1_verdict(&l, p)
        );
        println!(
            "    trap energy={:.6} (optimum 0) grad={:.1e} min_hess={:.1e} second_order={}",
            rep.energy, rep.grad_norm, rep.min_hess_eig, rep.is_second_order
        );
        println!(
            "    residuals: column sums {:.1e}, orthogonality {:.1e}, triple products {:.1e}",
            res.column_sums, res.orthogonality, res.triple_products
        );
    }
    Ok(())
}
