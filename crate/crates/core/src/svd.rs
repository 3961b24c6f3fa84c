//! Full SVD of small and moderate dense matrices by one-sided Jacobi.
//!
//! Tall inputs are first reduced by an unpivoted QR, and the Jacobi sweeps
//! run on the square triangular factor. Wide inputs are handled through
//! their transpose. When only values are wanted, the input is reduced by
//! column-pivoted QR and the sweeps run on the transposed factor.

use crate::dense::{dot, norm2, Matrix};
use crate::error::{Error, Result};
use crate::householder::{qr_column_pivoted, qr_unpivoted};

pub const MAX_SWEEPS: usize = 60;

/// Economy SVD `A = U·diag(d)·Vᵀ` with `k = min(m, n)` columns in `U`, `V`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub u: Matrix,
    pub d: Vec<f64>,
    pub v: Matrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> Matrix {
        let mut ud = self.u.clone();
        for (j, &s) in self.d.iter().enumerate() {
            ud.col_mut(j).iter_mut().for_each(|x| *x *= s);
        }
        ud.matmul_t(&self.v).expect("consistent SVD shapes")
    }
}

pub fn svd_full(a: &Matrix) -> Result<SvdResult> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let (m, n) = a.shape();
    if m < n {
        let t = svd_full(&a.transpose())?;
        return Ok(SvdResult {
            u: t.v,
            d: t.d,
            v: t.u,
        });
    }
    if n == 0 {
        return Ok(SvdResult {
            u: Matrix::zeros(m, 0),
            d: Vec::new(),
            v: Matrix::zeros(0, 0),
        });
    }
    if m > n {
        let qr = qr_unpivoted(a)?;
        let inner = svd_full(&qr.r.submatrix(0..n, 0..n))?;
        let mut u = Matrix::zeros(m, n);
        u.set_submatrix(0, 0, &inner.u);
        qr.apply_q(&mut u);
        return Ok(SvdResult { u, ..inner });
    }

    let mut g = a.clone();
    let mut v = Matrix::identity(n);
    jacobi_sweeps(&mut g, Some(&mut v))?;

    let sigma = g.column_norms();
    let order = descending_order(&sigma);
    let d: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();
    let mut u = g.select_columns(&order);
    let v = v.select_columns(&order);
    let mut missing = Vec::new();
    for (j, &s) in d.iter().enumerate() {
        if s > f64::MIN_POSITIVE {
            u.col_mut(j).iter_mut().for_each(|x| *x /= s);
        } else {
            missing.push(j);
        }
    }
    complete_orthonormal(&mut u, &missing);
    Ok(SvdResult { u, d, v })
}

/// Singular values only, non-increasing.
pub fn svd_values(a: &Matrix) -> Result<Vec<f64>> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let (m, n) = a.shape();
    if m < n {
        return svd_values(&a.transpose());
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // Rows of a column-pivoted R are graded, so Jacobi on Rᵀ needs few sweeps.
    let r = qr_column_pivoted(a, n)?.r;
    let mut g = r.submatrix(0..n, 0..n).transpose();
    jacobi_sweeps(&mut g, None)?;
    let mut sigma = g.column_norms();
    sigma.sort_by(|x, y| y.total_cmp(x));
    Ok(sigma)
}

fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    order
}

/// Rotates column pairs of `g` until all are orthogonal to working
/// precision, accumulating the rotations into `v` when given.
///
/// A pair is left alone once `|gₚ·g_q| ≤ tol·‖gₚ‖·‖g_q‖` with
/// `tol = ε·√m`; the sweep loop ends on the first sweep with no rotation.
/// This bounds the off-diagonal Gram mass by `tol·‖A‖²_F`.
fn jacobi_sweeps(g: &mut Matrix, mut v: Option<&mut Matrix>) -> Result<usize> {
    let (m, n) = g.shape();
    let tol = f64::EPSILON * (m as f64).sqrt();
    let mut sq: Vec<f64> = (0..n).map(|j| dot(g.col(j), g.col(j))).collect();
    for sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta) = (sq[p], sq[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let (gp, gq) = g.col_pair_mut(p, q);
                let gamma = dot(gp, gq);
                if gamma.abs() <= tol * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + 1f64.hypot(zeta));
                let c = 1.0 / 1f64.hypot(t);
                let s = c * t;
                rotate(gp, gq, c, s);
                if let Some(v) = v.as_deref_mut() {
                    let (vp, vq) = v.col_pair_mut(p, q);
                    rotate(vp, vq, c, s);
                }
                sq[p] = alpha - t * gamma;
                sq[q] = beta + t * gamma;
            }
        }
        if !rotated {
            return Ok(sweep + 1);
        }
        // Refresh cached squared norms so the next convergence test is exact.
        for (j, s) in sq.iter_mut().enumerate() {
            *s = dot(g.col(j), g.col(j));
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

#[inline]
fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (p, q) = (*a, *b);
        *a = c * p - s * q;
        *b = s * p + c * q;
    }
}

/// Replaces the listed columns of `u` with unit vectors orthogonal to every
/// other column, using coordinate vectors and two Gram–Schmidt passes.
fn complete_orthonormal(u: &mut Matrix, missing: &[usize]) {
    if missing.is_empty() {
        return;
    }
    let m = u.rows();
    let mut filled: Vec<usize> = (0..u.cols()).filter(|j| !missing.contains(j)).collect();
    for &j in missing {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for e in 0..m {
            let mut x = vec![0.0; m];
            x[e] = 1.0;
            for _ in 0..2 {
                for &k in &filled {
                    let c = dot(u.col(k), &x);
                    x.iter_mut()
                        .zip(u.col(k))
                        .for_each(|(xi, uk)| *xi -= c * uk);
                }
            }
            let nx = norm2(&x);
            if best.as_ref().is_none_or(|(bn, _)| nx > *bn) {
                best = Some((nx, x));
            }
            if nx > 0.5 {
                break;
            }
        }
        let (nx, x) = best.expect("m > 0");
        u.col_mut(j)
            .iter_mut()
            .zip(&x)
            .for_each(|(ui, xi)| *ui = xi / nx);
        filled.push(j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{gaussian_matrix, RngState};

    fn check(a: &Matrix, s: &SvdResult) {
        let (m, n) = a.shape();
        let k = m.min(n);
        assert_eq!(s.d.len(), k);
        assert!(s.d.windows(2).all(|w| w[0] >= w[1]));
        assert!(s.d.iter().all(|&x| x >= 0.0));
        let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
        let res = a.sub(&s.reconstruct()).unwrap().frobenius_norm();
        assert!(res <= 1e-11 * scale, "reconstruction {res}");
        for (q, dim) in [(&s.u, m), (&s.v, n)] {
            let e = q.t_matmul(q).unwrap().sub(&Matrix::identity(k)).unwrap();
            assert!(e.frobenius_norm() <= 1e-11 * (dim as f64).sqrt());
        }
    }

    #[test]
    fn diagonal_input() {
        let a = Matrix::from_diag(&[1.0, 3.0, 2.0]);
        let s = svd_full(&a).unwrap();
        assert_eq!(s.d, vec![3.0, 2.0, 1.0]);
        check(&a, &s);
    }

    #[test]
    fn swap_matrix() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let s = svd_full(&a).unwrap();
        for x in &s.d {
            assert!((x - 1.0).abs() < 1e-15);
        }
        check(&a, &s);
    }

    #[test]
    fn rank_one_column_pair() {
        let a = Matrix::from_rows(&[[3.0, 0.0], [4.0, 0.0]]).unwrap();
        let s = svd_full(&a).unwrap();
        assert!((s.d[0] - 5.0).abs() < 1e-14);
        assert_eq!(s.d[1], 0.0);
        check(&a, &s);
    }

    #[test]
    fn rank_deficient_square_completes_u() {
        let x = gaussian_matrix(6, 2, &mut RngState::new(3)).unwrap();
        let y = gaussian_matrix(6, 2, &mut RngState::new(4)).unwrap();
        let a = x.matmul_t(&y).unwrap();
        let s = svd_full(&a).unwrap();
        assert!(s.d[2] <= 1e-14 * s.d[0]);
        check(&a, &s);
    }

    #[test]
    fn tall_wide_and_square_random() {
        let mut rng = RngState::new(17);
        for (m, n) in [(20, 7), (7, 20), (15, 15), (1, 4), (4, 1)] {
            let a = gaussian_matrix(m, n, &mut rng).unwrap();
            check(&a, &svd_full(&a).unwrap());
        }
    }

    #[test]
    fn values_of_orthonormal_are_one() {
        let g = gaussian_matrix(12, 12, &mut RngState::new(5)).unwrap();
        let q = qr_unpivoted(&g).unwrap().q_dense();
        for s in svd_values(&q).unwrap() {
            assert!((s - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn values_of_outer_product() {
        let x = [1.0, 2.0, 2.0];
        let y = [3.0, 4.0];
        let a = Matrix::from_fn(3, 2, |i, j| x[i] * y[j]);
        let s = svd_values(&a).unwrap();
        assert!((s[0] - 15.0).abs() <= 1e-13);
        assert!(s[1].abs() <= 1e-13);
    }

    #[test]
    fn transpose_has_same_values() {
        let a = gaussian_matrix(9, 5, &mut RngState::new(6)).unwrap();
        let (s, t) = (svd_values(&a).unwrap(), svd_values(&a.transpose()).unwrap());
        for (x, y) in s.iter().zip(&t) {
            assert!((x - y).abs() <= 1e-12 * s[0]);
        }
    }

    #[test]
    fn values_match_full() {
        let a = gaussian_matrix(11, 11, &mut RngState::new(7)).unwrap();
        let (s, f) = (svd_values(&a).unwrap(), svd_full(&a).unwrap().d);
        for (x, y) in s.iter().zip(&f) {
            assert!((x - y).abs() <= 1e-13 * s[0]);
        }
    }

    #[test]
    fn non_finite_rejected() {
        let mut a = Matrix::identity(2);
        a[(0, 1)] = f64::NAN;
        assert!(matches!(svd_full(&a), Err(Error::NonFinite)));
        assert!(matches!(svd_values(&a), Err(Error::NonFinite)));
    }

    #[test]
    fn empty_input() {
        let s = svd_full(&Matrix::zeros(3, 0)).unwrap();
        assert!(s.d.is_empty());
        assert!(svd_values(&Matrix::zeros(0, 2)).unwrap().is_empty());
    }

    #[test]
    fn zero_matrix() {
        let a = Matrix::zeros(4, 3);
        let s = svd_full(&a).unwrap();
        assert_eq!(s.d, vec![0.0; 3]);
        check(&a, &s);
    }
}
