use crate::dense::{dot, norm2, Matrix};

/// Householder reflector `H = I − 2·v·vᵀ` embedded at a row offset.
///
/// `H` acts on coordinates `offset .. offset + v.len()` and leaves the rest
/// untouched, i.e. the `I ⊕ H` embedding used when zeroing column `offset`.
/// `v` is a unit vector except for the identity reflector, where it is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Reflector {
    v: Vec<f64>,
    offset: usize,
}

impl Reflector {
    pub fn identity(len: usize, offset: usize) -> Self {
        Self {
            v: vec![0.0; len],
            offset,
        }
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.v.iter().all(|&x| x == 0.0)
    }

    /// Smallest ambient dimension the reflector fits in.
    pub fn extent(&self) -> usize {
        self.offset + self.v.len()
    }

    pub fn with_offset(mut self, offset: usize) -> Self {
        self.offset = offset;
        self
    }

    /// `v` embedded in an `n`-vector.
    pub fn embedded(&self, n: usize) -> Vec<f64> {
        let mut full = vec![0.0; n];
        full[self.offset..self.extent()].copy_from_slice(&self.v);
        full
    }

    /// `x ← H·x`, where `x` is a full-length vector.
    pub fn apply_vec(&self, x: &mut [f64]) {
        let seg = &mut x[self.offset..self.offset + self.v.len()];
        let s = 2.0 * dot(&self.v, seg);
        if s != 0.0 {
            for (xi, vi) in seg.iter_mut().zip(&self.v) {
                *xi -= s * vi;
            }
        }
    }

    /// `A ← H·A` restricted to the given columns.
    pub fn apply_left_cols(&self, a: &mut Matrix, cols: std::ops::Range<usize>) {
        for j in cols {
            self.apply_vec(a.col_mut(j));
        }
    }

    pub fn apply_left(&self, a: &mut Matrix) {
        let n = a.cols();
        self.apply_left_cols(a, 0..n);
    }

    /// `A ← A·H`.
    pub fn apply_right(&self, a: &mut Matrix) {
        let (off, len) = (self.offset, self.v.len());
        for i in 0..a.rows() {
            let s: f64 = (0..len).map(|k| a[(i, off + k)] * self.v[k]).sum();
            if s != 0.0 {
                for k in 0..len {
                    a[(i, off + k)] -= 2.0 * s * self.v[k];
                }
            }
        }
    }

    /// Dense `n × n` matrix of the embedded reflector.
    pub fn to_dense(&self, n: usize) -> Matrix {
        let mut h = Matrix::identity(n);
        self.apply_left(&mut h);
        h
    }
}

/// Reflector sending `a` to `β·e₁` with `β = −sign(a₁)·‖a‖`.
///
/// `sign(0)` counts as `+1`. A zero vector yields the identity reflector and
/// `β = 0`.
pub fn reflector_from_vector(a: &[f64]) -> (Reflector, f64) {
    let norm = norm2(a);
    if norm == 0.0 {
        return (Reflector::identity(a.len(), 0), 0.0);
    }
    let sign = if a[0] < 0.0 { -1.0 } else { 1.0 };
    let beta = -sign * norm;
    // β·e₁ − a; the first entry has no cancellation since β and a₁ differ in sign.
    let mut v: Vec<f64> = a.iter().map(|x| -x).collect();
    v[0] += beta;
    let vn = norm2(&v);
    v.iter_mut().for_each(|x| *x /= vn);
    (Reflector { v, offset: 0 }, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{gaussian_matrix, RngState};

    #[test]
    fn three_four_maps_to_minus_five() {
        let (h, beta) = reflector_from_vector(&[3.0, 4.0]);
        assert_eq!(beta, -5.0);
        let mut x = vec![3.0, 4.0];
        h.apply_vec(&mut x);
        assert!((x[0] + 5.0).abs() <= 1e-14 * 5.0);
        assert!(x[1].abs() <= 1e-14 * 5.0);
    }

    #[test]
    fn unit_vector_flips_sign() {
        let (h, beta) = reflector_from_vector(&[1.0, 0.0, 0.0]);
        assert_eq!(beta, -1.0);
        let mut x = vec![1.0, 0.0, 0.0];
        h.apply_vec(&mut x);
        assert_eq!(x, vec![-1.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_vector_gives_identity() {
        let (h, beta) = reflector_from_vector(&[0.0, 0.0]);
        assert_eq!(beta, 0.0);
        assert!(h.is_identity());
        let mut x = vec![2.0, -1.0];
        h.apply_vec(&mut x);
        assert_eq!(x, vec![2.0, -1.0]);
    }

    #[test]
    fn leading_zero_uses_positive_sign() {
        let (_, beta) = reflector_from_vector(&[0.0, 2.0]);
        assert_eq!(beta, -2.0);
    }

    #[test]
    fn unit_norm_and_involution() {
        let mut rng = RngState::new(21);
        for len in 1..12 {
            let a = gaussian_matrix(len, 1, &mut rng).unwrap();
            let (h, beta) = reflector_from_vector(a.col(0));
            assert!((norm2(h.v()) - 1.0).abs() <= 1e-14);
            let mut x = a.col(0).to_vec();
            h.apply_vec(&mut x);
            let scale = norm2(a.col(0));
            assert!((x[0] - beta).abs() <= 1e-14 * scale);
            assert!(x[1..].iter().all(|v| v.abs() <= 1e-14 * scale));
            h.apply_vec(&mut x);
            for (p, q) in x.iter().zip(a.col(0)) {
                assert!((p - q).abs() <= 1e-13 * scale);
            }
        }
    }

    #[test]
    fn right_application_matches_dense() {
        let mut rng = RngState::new(4);
        let v = gaussian_matrix(3, 1, &mut rng).unwrap();
        let (h, _) = reflector_from_vector(v.col(0));
        let h = h.with_offset(2);
        let a = gaussian_matrix(4, 6, &mut rng).unwrap();
        let mut b = a.clone();
        h.apply_right(&mut b);
        let dense = a.matmul(&h.to_dense(6)).unwrap();
        assert!(b.sub(&dense).unwrap().max_abs() < 1e-14);
    }
}
