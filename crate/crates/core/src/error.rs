use thiserror::Error;

/// Failures raised by the library.
///
/// Variants fall into two families: input validation (bad shapes, bad files,
/// bad parameters) and numerical failures (degenerate geometry, points that do
/// not meet the criticality tolerances). [`Error::exit_code`] maps them onto
/// the CLI's exit status.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix contains a NaN or infinite entry")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("row {row} collapsed during retraction (norm {norm:e})")]
    DegenerateRow { row: usize, norm: f64 },

    #[error("sign vector entry {index} is {value}, expected +1 or -1")]
    BadSignVector { index: usize, value: f64 },

    #[error("direction is not tangent: row {row} has <dV_i, V_i> = {residual:e}")]
    NotTangent { row: usize, residual: f64 },

    #[error("tangent Hessian of size {size} exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("configuration is globally optimal (<P_perp, VV^T> = {0:e}); no certificate exists")]
    OptimalPoint(f64),

    #[error("configuration violates the column alignment assumption (residual {0:e})")]
    Misaligned(f64),

    #[error("t1^2 + t2^2 = {0:e} vanishes; beta and delta are undefined")]
    DegenerateT(f64),

    #[error("configuration is not second-order critical: grad_norm {grad_norm:e}, min Hessian eigenvalue {min_hess_eig:e}")]
    NotCritical { grad_norm: f64, min_hess_eig: f64 },

    #[error("certificate chain violated: {0}")]
    ChainViolation(String),

    #[error("Laplacian ground truth is not the all-ones vector; apply the change of variable first")]
    NonCanonicalFrame,

    #[error("invalid shape for the adversarial construction: {0}")]
    BadShape(String),

    #[error("delta must lie in (0, 1], got {0}")]
    BadDelta(f64),

    #[error("alpha must lie in [0, 0.5), got {0}")]
    BadAlpha(f64),

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not symmetric: |A[{i}][{j}] - A[{j}][{i}]| = {gap:e} exceeds {tol:e}")]
    SymmetryViolation { i: usize, j: usize, gap: f64, tol: f64 },

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// 2 for validation problems, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DimensionMismatch(_)
            | Error::BadSignVector { .. }
            | Error::BadShape(_)
            | Error::BadDelta(_)
            | Error::BadAlpha(_)
            | Error::BadParameter(_)
            | Error::Parse(_)
            | Error::SymmetryViolation { .. }
            | Error::Io(_)
            | Error::Json(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
