use crate::block::Factorization;
use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::svd::svd_values;

/// Truncation errors `e_k = ‖A − Q(:,1:k)·R(1:k,:)·Pᵀ‖` at the listed ranks.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorCurve {
    pub label: String,
    pub ks: Vec<usize>,
    pub spectral: Vec<f64>,
    pub frobenius: Vec<f64>,
}

/// `|R(k,k)|` next to `σ_k`, `k = 1..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagComparison {
    pub r_abs: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl DiagComparison {
    pub fn ratios(&self) -> Vec<f64> {
        self.r_abs
            .iter()
            .zip(&self.sigma)
            .map(|(r, s)| r / s)
            .collect()
    }

    /// `max_k | |R(k,k)|/σ_k − 1 |`.
    pub fn max_ratio_deviation(&self) -> f64 {
        self.ratios()
            .into_iter()
            .fold(0.0, |m, r| m.max((r - 1.0).abs()))
    }
}

/// Ranks `0, b, 2b, …` up to and including `n`.
pub fn block_ranks(n: usize, b: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = (0..n).step_by(b.max(1)).collect();
    ks.push(n);
    ks
}

/// Errors of the truncated factorization, from dense expansions of `Q`,
/// `R` and `P`.
pub fn truncation_errors(
    a: &Matrix,
    f: &Factorization,
    ks: &[usize],
    label: &str,
) -> Result<ErrorCurve> {
    let (m, n) = a.shape();
    if (f.m, f.n) != (m, n) {
        return Err(Error::dim(
            "truncation_errors",
            format!("{m}x{n} matrix vs {}x{} factorization", f.m, f.n),
        ));
    }
    if let Some(&k) = ks.iter().find(|&&k| k > n.min(m)) {
        return Err(Error::InvalidArgument(format!(
            "rank {k} outside 0..={}",
            n.min(m)
        )));
    }
    let q = f.expand_q()?;
    let p = f.expand_p()?;
    let mut curve = ErrorCurve {
        label: label.to_string(),
        ks: ks.to_vec(),
        spectral: Vec::with_capacity(ks.len()),
        frobenius: Vec::with_capacity(ks.len()),
    };
    for &k in ks {
        let err = if k == 0 {
            a.clone()
        } else {
            let qk = q.submatrix(0..m, 0..k);
            let rk = f.r.submatrix(0..k, 0..n);
            a.sub(&qk.matmul(&rk)?.matmul_t(&p)?)?
        };
        curve.spectral.push(err.spectral_norm()?);
        curve.frobenius.push(err.frobenius_norm());
    }
    Ok(curve)
}

/// Optimal truncation errors: `σ_{k+1}` and `(Σ_{j>k} σ_j²)^{1/2}`.
pub fn svd_error_curve(sigma: &[f64], ks: &[usize]) -> ErrorCurve {
    // tail[k] = Σ_{j≥k} σ_j² (0-based), summed from the small end.
    let mut tail = vec![0.0; sigma.len() + 1];
    for j in (0..sigma.len()).rev() {
        tail[j] = tail[j + 1] + sigma[j] * sigma[j];
    }
    let at = |k: usize| k.min(sigma.len());
    ErrorCurve {
        label: "svd-optimal".to_string(),
        ks: ks.to_vec(),
        spectral: ks
            .iter()
            .map(|&k| sigma.get(k).copied().unwrap_or(0.0))
            .collect(),
        frobenius: ks.iter().map(|&k| tail[at(k)].sqrt()).collect(),
    }
}

pub fn diag_comparison(f: &Factorization, sigma: &[f64]) -> DiagComparison {
    let mut r_abs = f.abs_diag();
    r_abs.truncate(sigma.len());
    DiagComparison {
        r_abs,
        sigma: sigma[..sigma.len().min(f.m.min(f.n))].to_vec(),
    }
}

/// Singular values of `a` paired with a factorization, as a convenience for
/// callers that do not already have them.
pub fn diag_comparison_for(a: &Matrix, f: &Factorization) -> Result<DiagComparison> {
    Ok(diag_comparison(f, &svd_values(a)?))
}
