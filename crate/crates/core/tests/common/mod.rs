//! Independent oracles shared by the integration tests. Nothing here calls
//! into the crate's numerical routines.

#![allow(dead_code)]

use bmcert::{Mat, SymMatrix};
use nalgebra::DMatrix;

pub fn to_nalgebra(a: &SymMatrix) -> DMatrix<f64> {
    let n = a.n();
    DMatrix::from_fn(n, n, |i, j| a[(i, j)])
}

/// Ascending eigenvalues from nalgebra.
pub fn eigenvalues(a: &SymMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = to_nalgebra(a).symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v
}

/// `ddiag(C 1 1^T) - C` built entry by entry for `x = 1`.
pub fn laplacian_oracle(c: &SymMatrix) -> DMatrix<f64> {
    let n = c.n();
    DMatrix::from_fn(n, n, |i, j| {
        let row: f64 = (0..n).map(|k| c[(i, k)]).sum();
        if i == j {
            row - c[(i, i)]
        } else {
            -c[(i, j)]
        }
    })
}

/// `sum_ij L_ij <v_i, v_j>`.
pub fn energy_oracle(l: &DMatrix<f64>, v: &[Vec<f64>]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
            s += l[(i, j)] * d;
        }
    }
    s
}

/// Row-normalized `V + t dV`.
pub fn retract_oracle(v: &[Vec<f64>], dv: &Mat, t: f64) -> Vec<Vec<f64>> {
    v.iter()
        .enumerate()
        .map(|(i, r)| {
            let moved: Vec<f64> = r.iter().zip(dv.row(i)).map(|(a, b)| a + t * b).collect();
            let nn = moved.iter().map(|a| a * a).sum::<f64>().sqrt();
            moved.iter().map(|a| a / nn).collect()
        })
        .collect()
}

/// `X - ddiag(X V^T) V`, row by row.
pub fn project_oracle(v: &[Vec<f64>], x: &Mat) -> Mat {
    Mat::from_fn(x.rows(), x.cols(), |i, k| {
        let d: f64 = v[i].iter().zip(x.row(i)).map(|(a, b)| a * b).sum();
        x[(i, k)] - d * v[i][k]
    })
}

/// Exhaustive maximum of `<C, s s^T>` over `s` in `{-1, +1}^n` with `s_0 = +1`.
pub fn brute_force_max(c: &SymMatrix) -> (f64, Vec<f64>) {
    let n = c.n();
    let mut best = f64::NEG_INFINITY;
    let mut arg = vec![1.0; n];
    for mask in 0u64..(1u64 << (n - 1)) {
        let s: Vec<f64> = (0..n)
            .map(|i| if i > 0 && (mask >> (i - 1)) & 1 == 1 { -1.0 } else { 1.0 })
            .collect();
        let mut val = 0.0;
        for i in 0..n {
            for j in 0..n {
                val += c[(i, j)] * s[i] * s[j];
            }
        }
        if val > best {
            best = val;
            arg = s;
        }
    }
    (best, arg)
}

/// `<P_perp, A>` via the explicit projector.
pub fn centered_inner(a: &SymMatrix) -> f64 {
    let n = a.n();
    let m = to_nalgebra(a);
    let p = DMatrix::<f64>::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
    (p.component_mul(&m)).sum()
}

/// Cycle graph on `n` vertices with unit weights.
pub fn ring(n: usize) -> SymMatrix {
    SymMatrix::from_upper(n, |i, j| if j == i + 1 || (i == 0 && j == n - 1) { 1.0 } else { 0.0 })
}
