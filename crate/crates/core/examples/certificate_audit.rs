//! Builds the dual certificate at a spurious critical point of a cycle graph
//! and prints the audit record that `bmcert certify` writes.

use bmcert::harness::audit_configuration;
use bmcert::landscape::build_laplacian;
use bmcert::manifold::random_configuration;
use bmcert::solver::{solve, SolverOptions};
use bmcert::SymMatrix;

fn main() -> bmcert::Result<()> {
    let n = 16;
    let c = SymMatrix::from_upper(n, |i, j| if j == i + 1 || (i == 0 && j == n - 1) { 1.0 } else { 0.0 });
    let l = build_laplacian(&c, &vec![1.0; n])?;
    println!("cycle graph n={n}: cond = {:.4}", l.condition_number());

    // Twisted states are spurious critical points; random starts find one
    // often enough.
    for seed in 0..20 {
        let res = solve(&l, &random_configuration(n, 2, seed), &SolverOptions::default())?;
        if res.report.is_global || !res.report.is_second_order {
            continue;
        }
        println!("seed {seed}: energy {:.4}", res.report.energy);
        let audit = audit_configuration(&l, &res.v_final)?;
        println!("{}", serde_json::to_string_pretty(&audit).unwrap());
        return Ok(());
    }
    println!("no spurious point found");
    Ok(())
}
