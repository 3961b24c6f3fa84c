use super::Reflector;
use crate::dense::{axpy, Matrix};
use crate::error::{Error, Result};
use crate::instrument;

/// Product of reflectors `H₁·H₂·…·H_b` in compact form `U = I + W·Y`.
///
/// `W` is `n × b`. `Y` is `b × n`; it is stored transposed (`n × b`, one
/// reflector vector per column) so that appending a reflector is a column
/// push. Applying `U` to an `n × k` block costs `O(n·b·k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WYFactor {
    w: Matrix,
    y_t: Matrix,
}

impl WYFactor {
    pub fn identity(n: usize) -> Self {
        Self {
            w: Matrix::zeros(n, 0),
            y_t: Matrix::zeros(n, 0),
        }
    }

    pub fn dim(&self) -> usize {
        self.w.rows()
    }

    /// Number of reflectors in the product.
    pub fn count(&self) -> usize {
        self.w.cols()
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    /// `Yᵀ`, whose columns are the embedded reflector vectors.
    pub fn y_t(&self) -> &Matrix {
        &self.y_t
    }

    /// `U ← U·H`.
    ///
    /// With `U = I + W·Y` and `H = I − 2vvᵀ`,
    /// `U·H = I + W·Y − 2·(v + W·(Y·v))·vᵀ`, so `W` gains the column
    /// `−2·(v + W·Y·v)` and `Y` gains the row `vᵀ`.
    pub fn push(&mut self, r: &Reflector) -> Result<()> {
        let n = self.dim();
        if r.extent() > n {
            return Err(Error::dim(
                "wy_accumulate",
                format!(
                    "reflector spans rows {}..{} of a {n}-dim product",
                    r.offset(),
                    r.extent()
                ),
            ));
        }
        let v = r.embedded(n);
        let mut w = v.clone();
        for k in 0..self.count() {
            let yv: f64 = self.y_t.col(k)[r.offset()..r.extent()]
                .iter()
                .zip(r.v())
                .map(|(a, b)| a * b)
                .sum();
            if yv != 0.0 {
                axpy(yv, self.w.col(k), &mut w);
            }
        }
        w.iter_mut().for_each(|x| *x *= -2.0);
        self.w.push_col(&w);
        self.y_t.push_col(&v);
        Ok(())
    }

    fn check_rows(&self, op: &'static str, a: &Matrix) -> Result<()> {
        if a.rows() != self.dim() {
            return Err(Error::dim(
                op,
                format!("{}-dim product applied to {} rows", self.dim(), a.rows()),
            ));
        }
        Ok(())
    }

    /// `A ← U·A`, or `A ← Uᵀ·A` when `transposed`.
    pub fn apply_left_in_place(&self, a: &mut Matrix, transposed: bool) -> Result<()> {
        self.check_rows("apply_wy_left", a)?;
        if self.count() == 0 || a.cols() == 0 {
            return Ok(());
        }
        let update = if transposed {
            // Uᵀ·A = A + Yᵀ·(Wᵀ·A)
            self.y_t.matmul(&self.w.t_matmul(a)?)?
        } else {
            // U·A = A + W·(Y·A)
            self.w.matmul(&self.y_t.t_matmul(a)?)?
        };
        *a = a.add(&update)?;
        Ok(())
    }

    /// `A ← A·U`, or `A ← A·Uᵀ` when `transposed`.
    pub fn apply_right_in_place(&self, a: &mut Matrix, transposed: bool) -> Result<()> {
        if a.cols() != self.dim() {
            return Err(Error::dim(
                "apply_wy_right",
                format!("{}-dim product applied to {} columns", self.dim(), a.cols()),
            ));
        }
        if self.count() == 0 || a.rows() == 0 {
            return Ok(());
        }
        let update = if transposed {
            // A·Uᵀ = A + (A·Yᵀ)·Wᵀ
            a.matmul(&self.y_t)?.matmul_t(&self.w)?
        } else {
            // A·U = A + (A·W)·Y
            a.matmul(&self.w)?.matmul_t(&self.y_t)?
        };
        *a = a.add(&update)?;
        Ok(())
    }

    /// Dense `n × n` expansion. Only tests and final reporting call this.
    pub fn to_dense(&self) -> Matrix {
        instrument::record_dense_expansion();
        let mut u = Matrix::identity(self.dim());
        self.apply_left_in_place(&mut u, false)
            .expect("identity has matching rows");
        u
    }
}

/// Accumulates the ordered product `H₁·H₂·…·H_b` acting on `n` coordinates.
pub fn wy_accumulate(reflectors: &[Reflector], n: usize) -> Result<WYFactor> {
    let mut u = WYFactor::identity(n);
    for r in reflectors {
        u.push(r)?;
    }
    Ok(u)
}

/// `U·A`, or `Uᵀ·A` when `transposed`.
pub fn apply_wy_left(u: &WYFactor, a: &Matrix, transposed: bool) -> Result<Matrix> {
    let mut out = a.clone();
    u.apply_left_in_place(&mut out, transposed)?;
    Ok(out)
}

/// `A·U`.
pub fn apply_wy_right(a: &Matrix, u: &WYFactor) -> Result<Matrix> {
    let mut out = a.clone();
    u.apply_right_in_place(&mut out, false)?;
    Ok(out)
}
