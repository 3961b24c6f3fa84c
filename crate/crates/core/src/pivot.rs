//! Randomized selection of a block of pivots.
//!
//! A Gaussian sketch `Y = (XᵀX)^q·Xᵀ·Ω` of the trailing block captures its
//! dominant row space. Pivots are then chosen either as `b` columns of `X`
//! (column-pivoted QR of `Yᵀ`) or as `b` Householder reflectors that rotate
//! the mass of `Y` into the leading coordinates (unpivoted QR of `Y`).

use crate::dense::{gaussian_matrix, Matrix, RngState};
use crate::error::{Error, Result};
use crate::householder::{qr_column_pivoted, qr_unpivoted, wy_accumulate, WYFactor};
use crate::instrument;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SketchConfig {
    pub block: usize,
    pub oversample: usize,
    pub power: usize,
    pub orthonormalize_between_powers: bool,
}

impl SketchConfig {
    /// Re-orthonormalization defaults to on for `power ≥ 2`.
    pub fn new(block: usize, oversample: usize, power: usize) -> Self {
        Self {
            block,
            oversample,
            power,
            orthonormalize_between_powers: power >= 2,
        }
    }

    pub fn width(&self) -> usize {
        self.block + self.oversample
    }

    pub fn validate(&self, cols: usize) -> Result<()> {
        if self.block == 0 {
            return Err(Error::InvalidArgument("block size must be positive".into()));
        }
        if self.width() > cols {
            return Err(Error::InvalidArgument(format!(
                "sketch width {} + {} exceeds {cols} columns",
                self.block, self.oversample
            )));
        }
        Ok(())
    }
}

/// Orthonormal transform applied to a range of columns from the right.
#[derive(Clone, Debug, PartialEq)]
pub enum PivotTransform {
    /// Column `j` of `X·P` is column `order[j]` of `X`.
    Permutation(Vec<usize>),
    ReflectorProduct(WYFactor),
    /// Small dense orthogonal factor (the right singular vectors of a
    /// diagonalized panel, or of a whole matrix).
    Orthogonal(Matrix),
}

impl PivotTransform {
    pub fn dim(&self) -> usize {
        match self {
            PivotTransform::Permutation(order) => order.len(),
            PivotTransform::ReflectorProduct(u) => u.dim(),
            PivotTransform::Orthogonal(v) => v.rows(),
        }
    }

    pub fn is_permutation(&self) -> bool {
        matches!(self, PivotTransform::Permutation(_))
    }

    /// `A(:, offset..offset+dim) ← A(:, offset..offset+dim) · P`.
    pub fn apply_right(&self, a: &mut Matrix, offset: usize) -> Result<()> {
        let end = offset + self.dim();
        if end > a.cols() {
            return Err(Error::dim(
                "pivot apply",
                format!("columns {offset}..{end} of a {}-column matrix", a.cols()),
            ));
        }
        let block = a.submatrix(0..a.rows(), offset..end);
        let updated = match self {
            PivotTransform::Permutation(order) => block.select_columns(order),
            PivotTransform::ReflectorProduct(u) => {
                let mut b = block;
                u.apply_right_in_place(&mut b, false)?;
                b
            }
            PivotTransform::Orthogonal(v) => block.matmul(v)?,
        };
        a.set_submatrix(0, offset, &updated);
        Ok(())
    }

    pub fn to_dense(&self) -> Matrix {
        match self {
            PivotTransform::Permutation(order) => {
                let mut p = Matrix::zeros(order.len(), order.len());
                for (j, &i) in order.iter().enumerate() {
                    p[(i, j)] = 1.0;
                }
                p
            }
            PivotTransform::ReflectorProduct(u) => u.to_dense(),
            PivotTransform::Orthogonal(v) => {
                instrument::record_dense_expansion();
                v.clone()
            }
        }
    }
}

/// Orthonormal basis for the columns of a tall matrix (thin `Q` of an
/// unpivoted QR). Wide inputs are returned unchanged.
fn orthonormalize(y: Matrix) -> Result<Matrix> {
    if y.rows() < y.cols() {
        return Ok(y);
    }
    Ok(qr_unpivoted(&y)?.q_thin(y.cols()))
}

/// Sketch `Y = (XᵀX)^q·Xᵀ·Ω` with `Ω` an `m × (b + r)` Gaussian draw.
///
/// With `orthonormalize_between_powers`, the running product is replaced by
/// an orthonormal basis of its columns before every further application of
/// `X` or `Xᵀ`. The range is unchanged in exact arithmetic; the final
/// application of `Xᵀ` is kept unnormalized so row magnitudes survive.
pub fn build_sketch(x: &Matrix, cfg: &SketchConfig, rng: &mut RngState) -> Result<Matrix> {
    cfg.validate(x.cols())?;
    let omega = gaussian_matrix(x.rows(), cfg.width(), rng)?;
    let mut y = x.t_matmul(&omega)?;
    for _ in 0..cfg.power {
        if cfg.orthonormalize_between_powers {
            y = orthonormalize(y)?;
        }
        let mut z = x.matmul(&y)?;
        if cfg.orthonormalize_between_powers {
            z = orthonormalize(z)?;
        }
        y = x.t_matmul(&z)?;
    }
    Ok(y)
}

fn check_block(y: &Matrix, b: usize) -> Result<()> {
    let (n, w) = y.shape();
    if b == 0 || b > n || b > w {
        return Err(Error::InvalidArgument(format!(
            "cannot pick {b} pivots from a {n}x{w} sketch"
        )));
    }
    Ok(())
}

/// Picks `b` columns by running `b` steps of column-pivoted QR on `Yᵀ`.
///
/// The chosen columns come first, in pivot order; the others follow in
/// their original relative order.
pub fn select_pivot_permutation(y: &Matrix, b: usize) -> Result<PivotTransform> {
    check_block(y, b)?;
    let qr = qr_column_pivoted(&y.transpose(), b)?;
    let perm = qr.perm.expect("pivoted QR records a permutation");
    let mut chosen = vec![false; y.rows()];
    let mut order = Vec::with_capacity(y.rows());
    for &j in &perm[..b] {
        chosen[j] = true;
        order.push(j);
    }
    order.extend((0..y.rows()).filter(|&j| !chosen[j]));
    Ok(PivotTransform::Permutation(order))
}

/// The first `b` reflectors of an unpivoted QR of `Y`, so that
/// `Sᵀ·Y(:, 1:b)` is upper triangular.
///
/// Over-sampled columns beyond the first `b` do not enter: only the first
/// `b` QR steps are executed, and without pivoting they see only the first
/// `b` columns.
pub fn select_pivot_reflectors(y: &Matrix, b: usize) -> Result<PivotTransform> {
    check_block(y, b)?;
    let n = y.rows();
    let head = y.submatrix(0..n, 0..b);
    let qr = qr_unpivoted(&head)?;
    Ok(PivotTransform::ReflectorProduct(wy_accumulate(
        &qr.reflectors,
        n,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::householder::reflector_from_vector;

    #[test]
    fn plain_sketch_is_xt_omega() {
        let mut rng = RngState::new(1);
        let x = gaussian_matrix(8, 6, &mut rng).unwrap();
        let cfg = SketchConfig::new(3, 0, 0);
        let y = build_sketch(&x, &cfg, &mut RngState::new(9)).unwrap();
        let omega = gaussian_matrix(8, 3, &mut RngState::new(9)).unwrap();
        assert_eq!(y, x.t_matmul(&omega).unwrap());
    }

    #[test]
    fn single_nonzero_column_of_x_gives_single_nonzero_row() {
        // Row i of Y = Xᵀ·Ω only sees column i of X.
        let mut x = Matrix::zeros(6, 5);
        for i in 0..6 {
            x[(i, 2)] = (i + 1) as f64;
        }
        let y = build_sketch(&x, &SketchConfig::new(2, 1, 0), &mut RngState::new(4)).unwrap();
        for i in 0..5 {
            for j in 0..3 {
                if i != 2 {
                    assert_eq!(y[(i, j)], 0.0);
                } else {
                    assert_ne!(y[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn one_power_step_matches_explicit_chain() {
        let x = gaussian_matrix(10, 10, &mut RngState::new(2)).unwrap();
        let cfg = SketchConfig::new(4, 0, 1);
        assert!(!cfg.orthonormalize_between_powers);
        let y = build_sketch(&x, &cfg, &mut RngState::new(3)).unwrap();
        let omega = gaussian_matrix(10, 4, &mut RngState::new(3)).unwrap();
        let xtx = x.t_matmul(&x).unwrap();
        let chain = xtx.matmul(&x.t_matmul(&omega).unwrap()).unwrap();
        let rel = y.sub(&chain).unwrap().frobenius_norm() / chain.frobenius_norm();
        assert!(rel <= 1e-12, "relative gap {rel}");
    }

    #[test]
    fn orthonormalized_powers_keep_the_range() {
        let x = gaussian_matrix(12, 9, &mut RngState::new(5)).unwrap();
        let mut cfg = SketchConfig::new(3, 0, 2);
        assert!(cfg.orthonormalize_between_powers);
        let y_orth = build_sketch(&x, &cfg, &mut RngState::new(6)).unwrap();
        cfg.orthonormalize_between_powers = false;
        let y_raw = build_sketch(&x, &cfg, &mut RngState::new(6)).unwrap();
        // Both span the same 3-dim subspace: projecting one onto the other's basis is exact.
        let q = qr_unpivoted(&y_orth).unwrap().q_thin(3);
        let proj = q.matmul(&q.t_matmul(&y_raw).unwrap()).unwrap();
        let rel = y_raw.sub(&proj).unwrap().frobenius_norm() / y_raw.frobenius_norm();
        assert!(rel < 1e-10, "{rel}");
    }

    #[test]
    fn sketch_too_wide_rejected() {
        let x = Matrix::identity(4);
        let err = build_sketch(&x, &SketchConfig::new(3, 2, 0), &mut RngState::new(1));
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
        let err = build_sketch(&x, &SketchConfig::new(0, 0, 0), &mut RngState::new(1));
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn permutation_picks_only_nonzero_row() {
        let mut y = Matrix::zeros(5, 2);
        y[(3, 0)] = 1.0;
        y[(3, 1)] = -2.0;
        let p = select_pivot_permutation(&y, 1).unwrap();
        assert_eq!(p, PivotTransform::Permutation(vec![3, 0, 1, 2, 4]));
    }

    #[test]
    fn permutation_ties_take_lowest_indices() {
        let y = Matrix::from_fn(6, 3, |i, j| f64::from(u8::from(i == j)));
        let p = select_pivot_permutation(&y, 3).unwrap();
        assert_eq!(p, PivotTransform::Permutation(vec![0, 1, 2, 3, 4, 5]));
    }

    #[test]
    fn full_permutation_gives_decreasing_diagonal() {
        let mut rng = RngState::new(7);
        let a = gaussian_matrix(10, 10, &mut rng).unwrap();
        let y = build_sketch(&a, &SketchConfig::new(10, 0, 0), &mut rng).unwrap();
        let PivotTransform::Permutation(order) = select_pivot_permutation(&y, 10).unwrap() else {
            unreachable!()
        };
        let yt = y.transpose().select_columns(&order);
        let d = qr_unpivoted(&yt).unwrap().r.diag();
        assert!(d.windows(2).all(|w| w[0].abs() >= w[1].abs()), "{d:?}");
    }

    #[test]
    fn permutation_too_many_pivots() {
        let y = Matrix::zeros(4, 2);
        assert!(select_pivot_permutation(&y, 3).is_err());
        assert!(select_pivot_reflectors(&Matrix::zeros(2, 3), 3).is_err());
    }

    #[test]
    fn reflectors_on_identity_columns() {
        let y = Matrix::from_fn(6, 2, |i, j| f64::from(u8::from(i == j)));
        let s = select_pivot_reflectors(&y, 2).unwrap().to_dense();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((s[(i, j)].abs() - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn single_reflector_case() {
        let y = gaussian_matrix(7, 3, &mut RngState::new(8)).unwrap();
        let s = select_pivot_reflectors(&y, 1).unwrap().to_dense();
        let (h, _) = reflector_from_vector(y.col(0));
        assert!(s.sub(&h.to_dense(7)).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn reflectors_concentrate_mass() {
        let y = gaussian_matrix(12, 3, &mut RngState::new(9)).unwrap();
        let s = select_pivot_reflectors(&y, 3).unwrap();
        let PivotTransform::ReflectorProduct(u) = &s else {
            unreachable!()
        };
        assert_eq!(u.count(), 3);
        let sty = crate::householder::apply_wy_left(u, &y, true).unwrap();
        let tail = sty.submatrix(3..12, 0..3).frobenius_norm();
        assert!(tail <= 1e-12 * y.frobenius_norm());
        let st = s.to_dense();
        let e = st
            .t_matmul(&st)
            .unwrap()
            .sub(&Matrix::identity(12))
            .unwrap();
        assert!(e.frobenius_norm() < 1e-12);
    }

    #[test]
    fn apply_right_matches_dense() {
        let mut rng = RngState::new(10);
        let a = gaussian_matrix(5, 8, &mut rng).unwrap();
        let y = gaussian_matrix(6, 2, &mut rng).unwrap();
        let transforms = [
            select_pivot_permutation(&y, 2).unwrap(),
            select_pivot_reflectors(&y, 2).unwrap(),
            PivotTransform::Orthogonal(qr_unpivoted(&y).unwrap().q_dense()),
        ];
        for t in transforms {
            let mut b = a.clone();
            t.apply_right(&mut b, 2).unwrap();
            let mut full = Matrix::identity(8);
            full.set_submatrix(2, 2, &t.to_dense());
            let want = a.matmul(&full).unwrap();
            assert!(b.sub(&want).unwrap().max_abs() < 1e-14);
        }
        let mut b = a.clone();
        assert!(PivotTransform::Permutation(vec![0; 7])
            .apply_right(&mut b, 2)
            .is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn permutation_choice_is_scale_invariant(seed in any::<u64>(), c in 1e-3..1e3f64) {
            let y = gaussian_matrix(15, 6, &mut RngState::new(seed)).unwrap();
            prop_assert_eq!(
                select_pivot_permutation(&y, 4).unwrap(),
                select_pivot_permutation(&y.scale(c), 4).unwrap()
            );
        }

        #[test]
        fn permutation_is_bijection(seed in any::<u64>(), b in 1usize..6) {
            let y = gaussian_matrix(12, 6, &mut RngState::new(seed)).unwrap();
            let PivotTransform::Permutation(order) = select_pivot_permutation(&y, b).unwrap() else {
                unreachable!()
            };
            let mut sorted = order.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..12).collect::<Vec<_>>());
        }

        #[test]
        fn reflector_product_is_orthonormal(seed in any::<u64>(), n in 4usize..50) {
            let b = (n / 3).max(1);
            let y = gaussian_matrix(n, b, &mut RngState::new(seed)).unwrap();
            let s = select_pivot_reflectors(&y, b).unwrap().to_dense();
            let e = s.t_matmul(&s).unwrap().sub(&Matrix::identity(n)).unwrap();
            prop_assert!(e.frobenius_norm() <= 1e-12);
        }
    }
}
