use super::{reflector_from_vector, wy_accumulate, Reflector, WYFactor};
use crate::dense::{norm2, Matrix};
use crate::error::{Error, Result};
use crate::instrument;

/// Householder QR in factored form: `A·P = Q·R`.
///
/// `r` holds the full transformed `m × n` matrix `Qᵀ·A·P`. After a complete
/// factorization it is upper triangular with exact zeros below the diagonal;
/// after a partial one (`steps < min(m, n)`) rows and columns `steps..` hold
/// the updated trailing block.
#[derive(Clone, Debug)]
pub struct QrResult {
    pub reflectors: Vec<Reflector>,
    pub r: Matrix,
    pub perm: Option<Vec<usize>>,
    pub steps: usize,
}

impl QrResult {
    pub fn m(&self) -> usize {
        self.r.rows()
    }

    pub fn n(&self) -> usize {
        self.r.cols()
    }

    pub fn wy(&self) -> WYFactor {
        wy_accumulate(&self.reflectors, self.m()).expect("reflectors fit in m rows")
    }

    /// `X ← Q·X`.
    pub fn apply_q(&self, x: &mut Matrix) {
        for h in self.reflectors.iter().rev() {
            h.apply_left(x);
        }
    }

    /// `X ← Qᵀ·X`.
    pub fn apply_qt(&self, x: &mut Matrix) {
        for h in &self.reflectors {
            h.apply_left(x);
        }
    }

    /// First `k` columns of `Q`.
    pub fn q_thin(&self, k: usize) -> Matrix {
        let mut q = Matrix::zeros(self.m(), k);
        for i in 0..k.min(self.m()) {
            q[(i, i)] = 1.0;
        }
        self.apply_q(&mut q);
        q
    }

    /// Dense `m × m` expansion of `Q`.
    pub fn q_dense(&self) -> Matrix {
        instrument::record_dense_expansion();
        self.q_thin(self.m())
    }

    /// Leading `min(m, n)` rows of `r`.
    pub fn r_upper(&self) -> Matrix {
        let k = self.m().min(self.n());
        self.r.submatrix(0..k, 0..self.n())
    }

    pub fn perm_or_identity(&self) -> Vec<usize> {
        self.perm.clone().unwrap_or_else(|| (0..self.n()).collect())
    }

    pub fn abs_diag(&self) -> Vec<f64> {
        self.r.diag().into_iter().map(f64::abs).collect()
    }
}

/// Zeroes column `j` below the diagonal and updates the columns to its right.
///
/// No reflector is produced for the last row: a length-one reflector would
/// only flip a sign.
fn eliminate_column(a: &mut Matrix, j: usize) -> Option<Reflector> {
    let m = a.rows();
    if j + 1 >= m {
        return None;
    }
    let (h, beta) = reflector_from_vector(&a.col(j)[j..]);
    let h = h.with_offset(j);
    h.apply_left_cols(a, j + 1..a.cols());
    let col = a.col_mut(j);
    col[j] = beta;
    col[j + 1..].iter_mut().for_each(|x| *x = 0.0);
    Some(h)
}

/// Householder QR without pivoting, for `rows ≥ cols`.
pub fn qr_unpivoted(a: &Matrix) -> Result<QrResult> {
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::dim(
            "qr_unpivoted",
            format!("needs rows >= cols, got {m}x{n}"),
        ));
    }
    let mut r = a.clone();
    let reflectors = (0..n).filter_map(|j| eliminate_column(&mut r, j)).collect();
    Ok(QrResult {
        reflectors,
        r,
        perm: None,
        steps: n,
    })
}

/// Classical column-pivoted Householder QR, stopped after `steps` steps.
///
/// Each step moves the remaining column of largest norm (lowest index on
/// ties) into place and eliminates it. Norms are recomputed from the current
/// trailing block on every step.
pub fn qr_column_pivoted(a: &Matrix, steps: usize) -> Result<QrResult> {
    let (m, n) = a.shape();
    if steps > m.min(n) {
        return Err(Error::InvalidArgument(format!(
            "{steps} pivot steps requested for a {m}x{n} matrix"
        )));
    }
    let mut r = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut reflectors = Vec::with_capacity(steps);
    for j in 0..steps {
        let mut best = j;
        let mut best_norm = norm2(&r.col(j)[j..]);
        for c in j + 1..n {
            let nc = norm2(&r.col(c)[j..]);
            if nc > best_norm {
                best = c;
                best_norm = nc;
            }
        }
        r.swap_columns(j, best);
        perm.swap(j, best);
        reflectors.extend(eliminate_column(&mut r, j));
    }
    Ok(QrResult {
        reflectors,
        r,
        perm: Some(perm),
        steps,
    })
}

/// Pivoted QR of a tall panel in two stages: an unpivoted QR `A = Q′·R′`,
/// then a column-pivoted QR of the small triangle `R′·P = Q″·R`, giving
/// `Q = Q′·(Q″ ⊕ I)`.
pub fn qr_tall_pivoted(a: &Matrix) -> Result<QrResult> {
    let (m, b) = a.shape();
    let outer = qr_unpivoted(a)?;
    let inner = qr_column_pivoted(&outer.r.submatrix(0..b, 0..b), b)?;
    let mut r = Matrix::zeros(m, b);
    r.set_submatrix(0, 0, &inner.r);
    let mut reflectors = outer.reflectors;
    reflectors.extend(inner.reflectors);
    Ok(QrResult {
        reflectors,
        r,
        perm: inner.perm,
        steps: b,
    })
}
