mod common;

use bmcert::symlin::{eig, hadamard, spectral_norm};
use bmcert::SymMatrix;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use common::eigenvalues;

fn random_sym(n: usize, seed: u64) -> SymMatrix {
    let mut r = bmcert::rng::seeded(seed);
    let mut draws = Vec::new();
    for _ in 0..n * n {
        draws.push(r.sample::<f64, _>(StandardNormal));
    }
    SymMatrix::from_upper(n, |i, j| draws[i * n + j])
}

fn check_against_oracle(a: &SymMatrix) {
    let e = eig(a).unwrap();
    let oracle = eigenvalues(a);
    let scale = a.frobenius_norm().max(1.0);
    for (x, y) in e.values.iter().zip(&oracle) {
        assert!((x - y).abs() <= 1e-10 * scale, "{x} vs {y}");
    }
    let rec = e.reconstruct();
    assert!(rec.sub(a).frobenius_norm() <= 1e-10 * scale);
    let q = &e.vectors;
    let qtq = q.transpose().matmul(q).unwrap();
    assert!(qtq.sub(&bmcert::Mat::identity(a.n())).max_abs() <= 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn eigenvalues_match_nalgebra(n in 1usize..40, seed in any::<u64>()) {
        check_against_oracle(&random_sym(n, seed));
    }

    #[test]
    fn spectral_norm_is_largest_magnitude(n in 1usize..25, seed in any::<u64>()) {
        let a = random_sym(n, seed);
        let oracle = eigenvalues(&a);
        let expected = oracle[0].abs().max(oracle[n - 1].abs());
        prop_assert!((spectral_norm(&a).unwrap() - expected).abs() <= 1e-10 * expected.max(1.0));
    }

    #[test]
    fn schur_product_of_psd_is_psd(n in 2usize..20, seed in any::<u64>()) {
        let b = random_sym(n, seed);
        let psd = b.mul_mat(b.as_mat()).map(|m| SymMatrix::from_mat(m).unwrap()).unwrap();
        let h = hadamard(&psd, &psd).unwrap();
        prop_assert!(h.is_psd(1e-10).unwrap());
    }

    #[test]
    fn text_round_trip_is_exact(n in 1usize..12, seed in any::<u64>()) {
        let a = random_sym(n, seed);
        prop_assert_eq!(SymMatrix::parse(&a.to_text()).unwrap(), a);
    }
}

#[test]
fn large_matrix_matches_oracle() {
    check_against_oracle(&random_sym(400, 17));
}

#[test]
fn repeated_eigenvalues() {
    let n = 30;
    let a = SymMatrix::from_upper(n, |i, j| if i == j { n as f64 - 1.0 } else { -1.0 });
    check_against_oracle(&a);
}
