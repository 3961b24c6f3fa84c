//! Dense storage, seeded Gaussian sampling and basic products.

mod matrix;
mod rng;

pub use matrix::{axpy, dot, norm2, Matrix};
pub use rng::{gaussian_matrix, RngState};

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-10.0..10.0f64, rows * cols)
            .prop_map(move |d| Matrix::from_col_major(rows, cols, d).unwrap())
    }

    proptest! {
        #[test]
        fn matmul_is_associative(a in matrix(5, 5), b in matrix(5, 5), c in matrix(5, 5)) {
            let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
            let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
            let scale = a.max_abs() * b.max_abs() * c.max_abs() * 25.0 + 1.0;
            prop_assert!(left.sub(&right).unwrap().max_abs() <= 1e-12 * scale);
        }

        #[test]
        fn norm_sandwich(seed in any::<u64>(), m in 1usize..8, n in 1usize..8) {
            let a = gaussian_matrix(m, n, &mut RngState::new(seed)).unwrap();
            let two = a.spectral_norm().unwrap();
            let fro = a.frobenius_norm();
            let k = m.min(n) as f64;
            prop_assert!(two <= fro * (1.0 + 1e-12));
            prop_assert!(fro <= k.sqrt() * two * (1.0 + 1e-12));
        }

        #[test]
        fn text_roundtrip(a in matrix(3, 4)) {
            prop_assert_eq!(Matrix::from_text(&a.to_text()).unwrap(), a);
        }
    }
}
