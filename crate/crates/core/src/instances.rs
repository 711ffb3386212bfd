//! Cost matrices: Z2 synchronization with Gaussian or Bernoulli noise,
//! Kuramoto couplings, and the tight adversarial construction whose Laplacian
//! has condition number exactly `p` yet admits a spurious second-order
//! critical point.
//!
//! Generators fix the ground truth to `x = 1_n`; other sign vectors enter
//! through [`load_instance`] and are folded away by [`Instance::canonical`].

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{build_laplacian, check_sign_vector, Laplacian};
use crate::manifold::Configuration;
use crate::rng;
use crate::symlin::{Mat, SymMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    GaussianZ2,
    BernoulliZ2,
    Kuramoto,
    Adversarial,
    File,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Params {
    Sigma { sigma: f64 },
    Delta { delta: f64 },
    Alpha { alpha: f64 },
    Shape { n: usize, p: usize },
    None {},
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub c: SymMatrix,
    pub x: Vec<f64>,
    pub model: Model,
    pub params: Params,
    pub seed: Option<u64>,
}

/// Sidecar written next to a saved matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub model: Model,
    pub params: Params,
    pub seed: Option<u64>,
    pub n: usize,
    pub x: Vec<f64>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.c.n()
    }

    pub fn laplacian(&self) -> Result<Laplacian> {
        build_laplacian(&self.c, &self.x)
    }

    /// `C -> diag(x) C diag(x)`, `x -> 1_n`.
    pub fn canonical(&self) -> Instance {
        Instance {
            c: self.c.congruence_diag(&self.x),
            x: vec![1.0; self.n()],
            ..self.clone()
        }
    }

    pub fn meta(&self) -> InstanceMeta {
        InstanceMeta {
            model: self.model,
            params: self.params.clone(),
            seed: self.seed,
            n: self.n(),
            x: self.x.clone(),
        }
    }

    /// Writes the matrix to `path` and the metadata to [`sidecar_path`].
    pub fn save(&self, path: &Path) -> Result<PathBuf> {
        fs::write(path, self.c.to_text())?;
        let side = sidecar_path(path);
        fs::write(&side, serde_json::to_string_pretty(&self.meta())?)?;
        Ok(side)
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::BadParameter(format!("need n >= 2, got {n}")));
    }
    Ok(())
}

/// `C = 1 1^T + sigma W` with `W_ij = W_ji ~ N(0, 1)`, diagonal zeroed.
pub fn gaussian_z2(n: usize, sigma: f64, seed: u64) -> Result<Instance> {
    check_n(n)?;
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::BadParameter(format!("sigma must be >= 0, got {sigma}")));
    }
    let mut r = rng::seeded(seed);
    let mut upper = Mat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let w: f64 = r.sample(StandardNormal);
            upper[(i, j)] = 1.0 + sigma * w;
        }
    }
    Ok(Instance {
        c: SymMatrix::from_upper(n, |i, j| if i == j { 0.0 } else { upper[(i, j)] }),
        x: vec![1.0; n],
        model: Model::GaussianZ2,
        params: Params::Sigma { sigma },
        seed: Some(seed),
    })
}

/// Off-diagonal entries `+1` with probability `(1 + delta)/2`, else `-1`.
pub fn bernoulli_z2(n: usize, delta: f64, seed: u64) -> Result<Instance> {
    check_n(n)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::BadDelta(delta));
    }
    let keep = (1.0 + delta) / 2.0;
    let mut r = rng::seeded(seed);
    let mut upper = Mat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let u: f64 = r.random();
            upper[(i, j)] = if u < keep { 1.0 } else { -1.0 };
        }
    }
    Ok(Instance {
        c: SymMatrix::from_upper(n, |i, j| if i == j { 0.0 } else { upper[(i, j)] }),
        x: vec![1.0; n],
        model: Model::BernoulliZ2,
        params: Params::Delta { delta },
        seed: Some(seed),
    })
}

/// Attractive coupling with probability `1 - alpha`, repulsive otherwise.
/// Same stream as `bernoulli_z2(n, 1 - 2 alpha, seed)`.
pub fn kuramoto_coupling(n: usize, alpha: f64, seed: u64) -> Result<Instance> {
    if !(0.0..0.5).contains(&alpha) {
        return Err(Error::BadAlpha(alpha));
    }
    let mut inst = bernoulli_z2(n, 1.0 - 2.0 * alpha, seed)?;
    inst.model = Model::Kuramoto;
    inst.params = Params::Alpha { alpha };
    Ok(inst)
}

#[derive(Clone, Debug)]
pub struct AdversarialInstance {
    pub instance: Instance,
    pub v_trap: Configuration,
    pub p: usize,
}

/// Residuals of the three constraint families on the trap configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrapResiduals {
    /// `max |V^T 1|`.
    pub column_sums: f64,
    /// `max |V^T V - (n/p) I|`.
    pub orthogonality: f64,
    /// `max_{a,b,c} |<v_a . v_b . v_c, 1>|`.
    pub triple_products: f64,
}

/// The trigonometric configuration with frequencies `m_j = 3j - 2`.
pub fn trap_configuration(n: usize, p: usize) -> Result<Configuration> {
    if p < 2 || n < 6 * p || (n % 2 == 1 && p % 2 == 1) {
        return Err(Error::BadShape(format!(
            "need p >= 2, n >= 6p and n or p even; got n = {n}, p = {p}"
        )));
    }
    let pairs = p / 2;
    let amp = (2.0 / p as f64).sqrt();
    let last = (1.0 / p as f64).sqrt();
    let v = Mat::from_fn(n, p, |i, k| {
        if k < 2 * pairs {
            let m = (3 * (k / 2) + 1) as f64;
            let angle = 2.0 * PI * m * i as f64 / n as f64;
            amp * if k % 2 == 0 { angle.cos() } else { angle.sin() }
        } else if i % 2 == 0 {
            -last
        } else {
            last
        }
    });
    Configuration::new(v)
}

/// `C = -(P_V + p P_{V perp} - p P_1)` with `P_V = (p/n) V V^T`, so that
/// `L = -C` has spectrum `{0, 1 (x p), p (x n-p-1)}` and `V` is a
/// non-optimal second-order critical point.
pub fn adversarial(n: usize, p: usize) -> Result<AdversarialInstance> {
    let v = trap_configuration(n, p)?;
    let pf = p as f64;
    let nf = n as f64;
    let g = v.gram();
    // P_V + p (I - P_V) - p P_1
    let c = SymMatrix::from_upper(n, |i, j| {
        let pv = pf / nf * g[(i, j)];
        let id = if i == j { 1.0 } else { 0.0 };
        -(pv + pf * (id - pv) - pf / nf)
    });
    Ok(AdversarialInstance {
        instance: Instance {
            c,
            x: vec![1.0; n],
            model: Model::Adversarial,
            params: Params::Shape { n, p },
            seed: None,
        },
        v_trap: v,
        p,
    })
}

impl AdversarialInstance {
    pub fn residuals(&self) -> TrapResiduals {
        let v = self.v_trap.as_mat();
        let (n, p) = v.shape();
        let column_sums = v.col_sums().iter().fold(0.0f64, |m, s| m.max(s.abs()));
        let vtv = v.gram_cols();
        let scale = n as f64 / p as f64;
        let mut orthogonality = 0.0f64;
        for a in 0..p {
            for b in 0..p {
                let target = if a == b { scale } else { 0.0 };
                orthogonality = orthogonality.max((vtv[(a, b)] - target).abs());
            }
        }
        let mut triple_products = 0.0f64;
        for a in 0..p {
            for b in a..p {
                for c in b..p {
                    let s: f64 = (0..n).map(|i| v[(i, a)] * v[(i, b)] * v[(i, c)]).sum();
                    triple_products = triple_products.max(s.abs());
                }
            }
        }
        TrapResiduals {
            column_sums,
            orthogonality,
            triple_products,
        }
    }

    /// `diag(V a) V - 1_n a^T`, a direction in the Hessian kernel at the trap.
    pub fn kernel_direction(&self, a: &[f64]) -> Result<Mat> {
        let v = self.v_trap.as_mat();
        let (n, p) = v.shape();
        if a.len() != p {
            return Err(Error::DimensionMismatch(format!(
                "kernel coefficient of length {} for p = {p}",
                a.len()
            )));
        }
        Ok(Mat::from_fn(n, p, |i, k| {
            let va: f64 = v.row(i).iter().zip(a).map(|(x, y)| x * y).sum();
            va * v[(i, k)] - a[k]
        }))
    }
}

/// Reads a matrix in the shared text format. The sign vector defaults to
/// `1_n`.
pub fn load_instance(path: &Path, x: Option<&[f64]>) -> Result<Instance> {
    let text = fs::read_to_string(path)?;
    let c = SymMatrix::parse(&text)?;
    let x = match x {
        Some(x) => {
            if x.len() != c.n() {
                return Err(Error::DimensionMismatch(format!(
                    "sign vector of length {} for n = {}",
                    x.len(),
                    c.n()
                )));
            }
            check_sign_vector(x)?;
            x.to_vec()
        }
        None => vec![1.0; c.n()],
    };
    Ok(Instance {
        c,
        x,
        model: Model::File,
        params: Params::None {},
        seed: None,
    })
}

/// Reads a sidecar written by [`Instance::save`].
pub fn load_meta(path: &Path) -> Result<InstanceMeta> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
