//! Kuramoto oscillators with a fraction `alpha` of repulsive couplings, run
//! from random phases and checked for synchrony.

use bmcert::harness::kuramoto_threshold;
use bmcert::instances::kuramoto_coupling;
use bmcert::kuramoto::{flow, synchronization_experiment, FlowOptions};
use bmcert::manifold::random_configuration;

fn main() -> bmcert::Result<()> {
    let n = 40;
    let opts = FlowOptions {
        t_max: 40.0,
        ..FlowOptions::default()
    };
    let thr = kuramoto_threshold(n, 2, 0.01);
    println!("n={n} threshold alpha < {thr:.4}{}", if thr <= 0.0 { " (vacuous at this size)" } else { "" });

    let inst = kuramoto_coupling(n, 0.05, 4)?;
    let traj = flow(&inst.canonical().c, &random_configuration(n, 2, 9), &opts)?;
    println!(
        "single run: r={:.6} synchronized={} energy monotone={} samples={}",
        traj.final_order_parameter(),
        traj.synchronized,
        traj.energy_monotone(),
        traj.times.len()
    );
    for (t, r) in traj.times.iter().zip(&traj.order_parameter).step_by(4) {
        println!("  t={t:>8.3} r={r:.5}");
    }

    for alpha in [0.0, 0.05, 0.2, 0.4] {
        let rate = synchronization_experiment(n, alpha, 2, 5, &opts, 11)?;
        println!("alpha={alpha:<5} sync rate {rate:.3}");
    }
    Ok(())
}
