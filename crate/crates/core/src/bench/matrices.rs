use std::fmt;
use std::str::FromStr;

use crate::dense::{gaussian_matrix, Matrix, RngState};
use crate::error::{Error, Result};
use crate::householder::qr_unpivoted;
use crate::svd::svd_values;

/// The three test spectra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    /// Singular values decaying geometrically from 1 to 1e-5.
    Fast,
    /// I.i.d. Gaussian entries with variance `1/n`.
    Gauss,
    /// Flat head near 1, steep drop, flat tail near 1e-5.
    SShape,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 3] = [MatrixKind::Fast, MatrixKind::Gauss, MatrixKind::SShape];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Fast => "fast",
            MatrixKind::Gauss => "gauss",
            MatrixKind::SShape => "sshape",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(MatrixKind::Fast),
            "gauss" => Ok(MatrixKind::Gauss),
            "sshape" => Ok(MatrixKind::SShape),
            other => Err(Error::InvalidArgument(format!(
                "unknown matrix kind {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TestMatrixSpec {
    pub kind: MatrixKind,
    pub n: usize,
    pub seed: u64,
}

impl TestMatrixSpec {
    pub fn new(kind: MatrixKind, n: usize, seed: u64) -> Self {
        Self { kind, n, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!(
                "test matrices need n >= 2, got {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// `σᵢ = (1e-5)^((i−1)/(n−1))`, `i = 1..n`.
pub fn fast_spectrum(n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|i| 1e-5_f64.powf(i as f64 / last)).collect()
}

/// `σₖ = 10^(−2.5·(1 + tanh(10·(k − n/2)/n)))`, `k = 1..n`.
pub fn sshape_spectrum(n: usize) -> Vec<f64> {
    let nf = n as f64;
    (1..=n)
        .map(|k| {
            let t = (10.0 * (k as f64 - nf / 2.0) / nf).tanh();
            10f64.powf(-2.5 * (1.0 + t))
        })
        .collect()
}

/// Haar-distributed orthogonal matrix: the `Q` factor of a Gaussian draw
/// with column signs fixed so that `diag(R) > 0`.
pub fn random_orthogonal(n: usize, rng: &mut RngState) -> Result<Matrix> {
    let g = gaussian_matrix(n, n, rng)?;
    let qr = qr_unpivoted(&g)?;
    let mut q = qr.q_dense();
    for j in 0..n {
        if qr.r[(j, j)] < 0.0 {
            q.col_mut(j).iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(q)
}

/// `U·diag(σ)·Vᵀ` with independent Haar `U`, `V` (drawn in that order).
pub fn with_spectrum(sigma: &[f64], rng: &mut RngState) -> Result<Matrix> {
    let n = sigma.len();
    let mut u = random_orthogonal(n, rng)?;
    let v = random_orthogonal(n, rng)?;
    for (j, &s) in sigma.iter().enumerate() {
        u.col_mut(j).iter_mut().for_each(|x| *x *= s);
    }
    u.matmul_t(&v)
}

/// Test matrix and its singular values, in non-increasing order.
///
/// For `Fast` and `SShape` the values are the prescribed spectrum; for
/// `Gauss` they are computed.
pub fn gen_matrix(spec: &TestMatrixSpec, rng: &mut RngState) -> Result<(Matrix, Vec<f64>)> {
    spec.validate()?;
    let n = spec.n;
    match spec.kind {
        MatrixKind::Fast => {
            let sigma = fast_spectrum(n);
            Ok((with_spectrum(&sigma, rng)?, sigma))
        }
        MatrixKind::SShape => {
            let sigma = sshape_spectrum(n);
            Ok((with_spectrum(&sigma, rng)?, sigma))
        }
        MatrixKind::Gauss => {
            let a = gaussian_matrix(n, n, rng)?.scale(1.0 / (n as f64).sqrt());
            let sigma = svd_values(&a)?;
            Ok((a, sigma))
        }
    }
}
