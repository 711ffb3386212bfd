//! Acceptance suite: eleven end-to-end criteria, each with its own tolerance
//! and time budget. Runs as a plain binary so every criterion prints one
//! PASS/FAIL line; any failure makes the process exit non-zero.

mod common;

use std::time::{Duration, Instant};

use bmcert::certificate::{
    build_certificate, build_ling_certificate, certified_cond_lower_bound, tangent_outer_mean,
    verify_certificate,
};
use bmcert::harness::{gaussian_threshold, run_phase, Criterion, PhaseConfig, PhaseModel};
use bmcert::instances::{adversarial, bernoulli_z2, gaussian_z2, kuramoto_coupling, AdversarialInstance, Instance};
use bmcert::kuramoto::{synchronization_trials, FlowOptions};
use bmcert::landscape::{
    classify_point, hessian_quadratic_form, rank1_optimality, riemannian_gradient, theorem1_verdict,
    Rank1Status, Theorem1Verdict, Tolerances, VERDICT_TOL,
};
use bmcert::manifold::{align_columns, random_configuration, random_tangent, Configuration};
use bmcert::rng::{derive_seed, seeded};
use bmcert::solver::{solve, SolverOptions};
use bmcert::Laplacian;
use rand::Rng;
use rand_distr::StandardNormal;

use common::*;

type Outcome = Result<String, String>;

const SHAPES: [(usize, usize); 4] = [(12, 2), (16, 2), (18, 3), (24, 4)];

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn traps() -> Vec<AdversarialInstance> {
    SHAPES.iter().map(|&(n, p)| adversarial(n, p).unwrap()).collect()
}

fn criterion_1() -> Outcome {
    for adv in traps() {
        let (n, p) = (adv.v_trap.n(), adv.p);
        let l = adv.instance.laplacian().map_err(|e| e.to_string())?;
        let ev = eigenvalues(l.matrix());
        let cond = ev[n - 1] / ev[1];
        check((cond - p as f64).abs() <= 1e-9 * p as f64, || format!("({n},{p}): oracle cond {cond}"))?;
        check((l.condition_number() - p as f64).abs() <= 1e-9 * p as f64, || {
            format!("({n},{p}): cond {}", l.condition_number())
        })?;
        let rep = classify_point(&l, &adv.v_trap, &Tolerances::for_laplacian(&l, p)).unwrap();
        check(rep.grad_norm <= 1e-9, || format!("({n},{p}): grad {}", rep.grad_norm))?;
        check(rep.min_hess_eig >= -1e-8 * l.norm(), || format!("({n},{p}): min eig {}", rep.min_hess_eig))?;
        let dist = adv.v_trap.distance_to_rank_one(&vec![1.0; n]);
        check(dist > n as f64 / 2.0, || format!("({n},{p}): distance {dist}"))?;
    }
    Ok("cond = p, trap is a non-optimal SOCP for all four shapes".into())
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for adv in traps() {
        let started = Instant::now();
        let p = adv.p;
        let pf = p as f64;
        let l = adv.instance.laplacian().unwrap();
        let (v, _) = align_columns(&adv.v_trap);
        let cert = build_certificate(&v, p).map_err(|e| e.to_string())?;
        let tag = format!("({},{p})", v.n());
        check((cert.trace_m - 1.0).abs() <= 1e-9, || format!("{tag}: tr M = {}", cert.trace_m))?;
        let zp = centered_inner(&cert.z);
        check((zp - pf).abs() <= 1e-9, || format!("{tag}: <Z, P_perp> = {zp}"))?;
        check((cert.ratio - pf).abs() <= 1e-7, || format!("{tag}: ratio {}", cert.ratio))?;
        let checks = verify_certificate(&cert, &v);
        check(checks.all_pass(), || format!("{tag}: {checks:?}"))?;
        certified_cond_lower_bound(&l, &cert, &v).map_err(|e| format!("{tag}: {e}"))?;
        // Chain again with oracle eigenvalues.
        let ev = eigenvalues(l.matrix());
        let lm = l.matrix().inner(&cert.m);
        let lo = ev[1] * zp;
        let hi = ev[ev.len() - 1] * cert.m.trace();
        check(lo <= lm + 1e-8 * lm.abs().max(1.0) && lm <= hi + 1e-8 * hi.abs().max(1.0), || {
            format!("{tag}: chain {lo} <= {lm} <= {hi}")
        })?;
        let t = started.elapsed();
        check(t < Duration::from_secs(1), || format!("{tag}: took {t:?}"))?;
        worst = worst.max(t.as_secs_f64());
    }
    Ok(format!("tr M = 1, ratio = p, six checks and chain hold (slowest {worst:.3}s)"))
}

/// Certified instances from the three generators, scanning seeds in order.
fn certified_instances() -> Vec<(Instance, usize)> {
    let mut out = Vec::new();
    let makers: [(&str, fn(usize, u64) -> Instance); 3] = [
        ("gaussian", |n, s| gaussian_z2(n, 0.6, s).unwrap()),
        ("bernoulli", |n, s| bernoulli_z2(n, 0.8, s).unwrap()),
        ("kuramoto", |n, s| kuramoto_coupling(n, 0.1, s).unwrap()),
    ];
    let mut seed = 0u64;
    while out.len() < 54 && seed < 400 {
        let (_, make) = makers[(seed % 3) as usize];
        let n = 20 + (seed as usize * 7) % 41;
        let p = 2 + (seed as usize / 3) % 2;
        let inst = make(n, 1000 + seed);
        let l = inst.laplacian().unwrap();
        if theorem1_verdict(&l, p) == Theorem1Verdict::BenignCertified {
            out.push((inst, p));
        }
        seed += 1;
    }
    out
}

fn criterion_3() -> Outcome {
    let insts = certified_instances();
    check(insts.len() >= 50, || format!("only {} certified instances", insts.len()))?;
    let mut models = std::collections::BTreeSet::new();
    for (k, (inst, p)) in insts.iter().enumerate() {
        models.insert(format!("{:?}", inst.model));
        let l = inst.laplacian().unwrap();
        let v0 = random_configuration(inst.n(), *p, derive_seed(3, &[k as u64]));
        let rep = solve(&l, &v0, &SolverOptions::default()).map_err(|e| e.to_string())?;
        let dist = rep.v_final.distance_to_rank_one(&vec![1.0; inst.n()]) / inst.n() as f64;
        check(rep.report.is_global && dist <= 1e-6, || {
            format!("instance {k} ({:?}, n = {}, p = {p}): distance {dist}", inst.model, inst.n())
        })?;
    }
    check(models.len() == 3, || format!("models covered: {models:?}"))?;
    Ok(format!("{} certified instances, every solve global", insts.len()))
}

/// Non-optimal SOCPs: the adversarial traps plus solver outputs on cycle
/// graphs, whose twisted states are spurious local minima.
fn spurious_socps() -> Vec<(Laplacian, Configuration)> {
    let mut out: Vec<_> = traps()
        .into_iter()
        .map(|a| (a.instance.laplacian().unwrap(), a.v_trap))
        .collect();
    for n in [16usize, 24] {
        let l = bmcert::build_laplacian(&ring(n), &vec![1.0; n]).unwrap();
        for seed in 0..8 {
            let rep = solve(&l, &random_configuration(n, 2, seed), &SolverOptions::default()).unwrap();
            if rep.report.is_second_order && !rep.report.is_global {
                out.push((l.clone(), rep.v_final));
            }
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let socps = spurious_socps();
    check(socps.len() >= 9, || format!("only {} spurious SOCPs", socps.len()))?;
    for (k, (l, v)) in socps.iter().enumerate() {
        let p = v.p();
        let (a, _) = align_columns(v);
        let ours = build_certificate(&a, p).map_err(|e| e.to_string())?;
        let ling = build_ling_certificate(&a, p).map_err(|e| e.to_string())?;
        let floor = (p as f64 - 1.0) / 2.0;
        check(ling.ratio >= floor - 1e-7, || format!("point {k}: ling ratio {}", ling.ratio))?;
        check(ours.ratio >= ling.ratio - 1e-7, || {
            format!("point {k}: ratio {} < ling {}", ours.ratio, ling.ratio)
        })?;
        certified_cond_lower_bound(l, &ours, &a).map_err(|e| format!("point {k}: {e}"))?;
    }
    let (a, _) = align_columns(&adversarial(12, 2).unwrap().v_trap);
    let ours = build_certificate(&a, 2).unwrap();
    let ling = build_ling_certificate(&a, 2).unwrap();
    check((ours.ratio - 2.0).abs() <= 1e-7 && (ling.ratio - 2.0).abs() <= 1e-7, || {
        format!("(12,2): ratios {} and {}", ours.ratio, ling.ratio)
    })?;
    Ok(format!("{} spurious SOCPs; ling >= (p-1)/2, ours >= ling; (12,2) both 2", socps.len()))
}

fn criterion_5() -> Outcome {
    let mut worst_g = 0.0f64;
    let mut worst_h = 0.0f64;
    // Gradient at random points.
    for seed in 0..10u64 {
        let n = 8 + seed as usize;
        let p = 2 + (seed as usize % 3);
        let inst = gaussian_z2(n, 1.5, seed).unwrap();
        let l = inst.laplacian().unwrap();
        let lo = laplacian_oracle(&inst.c);
        let v = random_configuration(n, p, 100 + seed);
        let rows = v.as_mat().to_rows();
        let mut r = seeded(200 + seed);
        let dv = random_tangent(&mut r, &v);
        let g = riemannian_gradient(&l, &v).unwrap();
        let exact = g.as_mat().inner(dv.as_mat());
        let t = 1e-6;
        let fd = (energy_oracle(&lo, &retract_oracle(&rows, dv.as_mat(), t))
            - energy_oracle(&lo, &retract_oracle(&rows, dv.as_mat(), -t)))
            / (2.0 * t);
        let rel = (fd - exact).abs() / exact.abs();
        worst_g = worst_g.max(rel);
        check(rel <= 1e-5, || format!("gradient seed {seed}: fd {fd} vs {exact}"))?;
    }
    // Hessian form at critical points: traps and solver outputs.
    let mut points: Vec<(Laplacian, DMatrixHolder, Configuration)> = Vec::new();
    for adv in traps() {
        let lo = laplacian_oracle(&adv.instance.c);
        points.push((adv.instance.laplacian().unwrap(), DMatrixHolder(lo), adv.v_trap));
    }
    for seed in 0..6u64 {
        let n = 10 + seed as usize;
        let inst = gaussian_z2(n, 0.5, 50 + seed).unwrap();
        let l = inst.laplacian().unwrap();
        let rep = solve(&l, &random_configuration(n, 2 + seed as usize % 2, seed), &SolverOptions::default()).unwrap();
        points.push((l, DMatrixHolder(laplacian_oracle(&inst.c)), rep.v_final));
    }
    for (k, (l, lo, v)) in points.iter().enumerate() {
        let rows = v.as_mat().to_rows();
        let mut r = seeded(300 + k as u64);
        let dv = random_tangent(&mut r, v);
        let exact = hessian_quadratic_form(l, v, dv.as_mat()).unwrap();
        let t = 1e-4;
        let f0 = energy_oracle(&lo.0, &rows);
        let fp = energy_oracle(&lo.0, &retract_oracle(&rows, dv.as_mat(), t));
        let fm = energy_oracle(&lo.0, &retract_oracle(&rows, dv.as_mat(), -t));
        let fd = (fp + fm - 2.0 * f0) / (t * t);
        let rel = (fd - exact).abs() / exact.abs();
        worst_h = worst_h.max(rel);
        check(rel <= 1e-4, || format!("hessian point {k}: fd {fd} vs {exact}"))?;
    }
    Ok(format!("worst relative error: gradient {worst_g:.1e}, Hessian {worst_h:.1e}"))
}

struct DMatrixHolder(nalgebra::DMatrix<f64>);

fn criterion_6() -> Outcome {
    let (n, p) = (300, 2);
    let sigma = 0.5 * gaussian_threshold(n, p, 0.01);
    let mut rates = Vec::new();
    for criterion in [Criterion::BenignCertified, Criterion::SolverGlobal] {
        let mut cfg = PhaseConfig::new(PhaseModel::GaussianZ2, n, p, vec![sigma], 20, criterion);
        cfg.seed = 6;
        let res = run_phase(&cfg).map_err(|e| e.to_string())?;
        rates.push(res.success_rate[0]);
    }
    check(rates.iter().all(|&r| r >= 0.95), || format!("sigma {sigma:.3}: rates {rates:?}"))?;
    Ok(format!("sigma = {sigma:.4}: certified {:.2}, solver global {:.2}", rates[0], rates[1]))
}

fn criterion_7() -> Outcome {
    let mut cfg = PhaseConfig::new(PhaseModel::BernoulliZ2, 300, 2, vec![0.9], 20, Criterion::BenignCertified);
    cfg.seed = 7;
    let res = run_phase(&cfg).map_err(|e| e.to_string())?;
    let rate = res.success_rate[0];
    check(rate >= 0.95, || format!("rate {rate}"))?;
    Ok(format!("delta = 0.9: certified {rate:.2}"))
}

fn criterion_8() -> Outcome {
    let out = synchronization_trials(200, 0.1, 2, 20, &FlowOptions::default(), 8).map_err(|e| e.to_string())?;
    let synced: Vec<_> = out.iter().filter(|o| o.synchronized).collect();
    let rate = synced.len() as f64 / out.len() as f64;
    check(rate >= 0.9, || format!("rate {rate}"))?;
    for o in &synced {
        check(o.final_order_parameter >= 1.0 - 1e-6 && o.energy_monotone, || format!("{o:?}"))?;
    }
    Ok(format!("alpha = 0.1: synchronized {rate:.2}, all monotone"))
}

fn criterion_9() -> Outcome {
    let mut r = seeded(9);
    let mut worst = 0.0f64;
    for adv in traps() {
        let l = adv.instance.laplacian().unwrap();
        for _ in 0..20 {
            let a: Vec<f64> = (0..adv.p).map(|_| r.sample(StandardNormal)).collect();
            let dv = adv.kernel_direction(&a).unwrap();
            let q = hessian_quadratic_form(&l, &adv.v_trap, &dv).map_err(|e| e.to_string())?;
            let scale = dv.frobenius_norm().powi(2);
            worst = worst.max(q.abs() / scale);
            check(q <= 1e-8 * scale, || format!("q = {q}, ||dV||^2 = {scale}"))?;
        }
    }
    Ok(format!("max |q| / ||dV||^2 = {worst:.1e}"))
}

fn criterion_10() -> Outcome {
    let mut found = 0;
    let mut seed = 0u64;
    while found < 10 && seed < 200 {
        let n = 8 + (seed as usize % 5);
        let inst = match seed % 3 {
            0 => gaussian_z2(n, 0.8, seed).unwrap(),
            1 => bernoulli_z2(n, 0.6, seed).unwrap(),
            _ => kuramoto_coupling(n, 0.2, seed).unwrap(),
        };
        seed += 1;
        let l = inst.laplacian().unwrap();
        if rank1_optimality(&l, VERDICT_TOL) != Rank1Status::UniqueOptimal {
            continue;
        }
        found += 1;
        let (best, arg) = brute_force_max(&inst.c);
        let ones: f64 = inst.c.sum();
        check(ones >= best - 1e-9 * best.abs().max(1.0), || {
            format!("seed {}: <C, 11^T> = {ones} < {best} at {arg:?}", seed - 1)
        })?;
    }
    check(found == 10, || format!("only {found} UniqueOptimal instances"))?;
    Ok("10 instances, all-ones attains the binary maximum".into())
}

fn criterion_11() -> Outcome {
    let adv = adversarial(12, 2).unwrap();
    let (v, _) = align_columns(&adv.v_trap);
    let cert = build_certificate(&v, 2).unwrap();
    let mean = tangent_outer_mean(&v, 100_000, 11).scaled(cert.beta);
    let err = cert.h.sub(&mean).frobenius_norm();
    let norm = cert.h.frobenius_norm();
    check(err <= 0.02 * norm, || format!("{err} > 0.02 * {norm}"))?;
    Ok(format!("relative error {:.2e}", err / norm))
}

fn main() {
    let suite: [(usize, &str, u64, fn() -> Outcome); 11] = [
        (1, "adversarial tightness", 5, criterion_1),
        (2, "certificate exactness", 4, criterion_2),
        (3, "benign completeness", 120, criterion_3),
        (4, "ling comparison", 5, criterion_4),
        (5, "gradient / Hessian finite differences", 10, criterion_5),
        (6, "gaussian Monte Carlo", 180, criterion_6),
        (7, "bernoulli Monte Carlo", 120, criterion_7),
        (8, "kuramoto synchronization", 300, criterion_8),
        (9, "Hessian kernel directions", 1, criterion_9),
        (10, "brute-force oracle", 30, criterion_10),
        (11, "H Monte Carlo", 30, criterion_11),
    ];
    let filter: Option<usize> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let mut failures = 0;
    for (id, name, budget, f) in suite {
        if filter.is_some_and(|k| k != id) {
            continue;
        }
        let start = Instant::now();
        let res = f();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match res {
            Ok(d) if secs <= budget as f64 => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget}s budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {id:>2} ({name}) [{secs:.2}s / {budget}s]: {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
}
