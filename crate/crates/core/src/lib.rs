//! Burer-Monteiro factorization of MaxCut-type semidefinite programs with a
//! rank-one solution.
//!
//! The crate answers one question from several angles: when does every
//! second-order critical point of `min <L, V V^T>` over `(S^{p-1})^n` sit at
//! the global minimizer `V V^T = x x^T`? The sufficient condition checked here
//! is `p > lambda_n(L) / lambda_2(L)`.
//!
//! * [`symlin`]: dense symmetric linear algebra (Jacobi eigensolver).
//! * [`manifold`]: geometry of the product of spheres.
//! * [`landscape`]: Laplacian, gradient, Hessian, criticality verdicts.
//! * [`solver`]: Riemannian descent with negative-curvature escape.
//! * [`certificate`]: the explicit dual certificate bounding the condition
//!   number from below at any non-optimal second-order critical point.
//! * [`instances`]: synchronization / Kuramoto cost matrices and the tight
//!   adversarial construction.
//! * [`kuramoto`]: the Kuramoto gradient flow and synchronization detection.
//! * [`harness`]: phase experiments, run records and the `bmcert` CLI.

pub mod certificate;
pub mod error;
pub mod harness;
pub mod instances;
pub mod kuramoto;
pub mod landscape;
pub mod manifold;
pub mod rng;
pub mod solver;
pub mod symlin;

pub use error::{Error, Result};
pub use landscape::{build_laplacian, Laplacian};
pub use manifold::{Configuration, TangentVector};
pub use symlin::{Mat, SymMatrix};
