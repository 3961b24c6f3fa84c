//! Blocked QR factorization with randomized block pivoting, a randomized
//! rank-revealing QR built on it, and the classical baselines
//! (column-pivoted Householder QR, Jacobi SVD) they are measured against.

pub mod bench;
pub mod block;
pub mod dense;
pub mod error;
pub mod householder;
pub mod instrument;
pub mod pivot;
pub mod svd;

pub use dense::{gaussian_matrix, Matrix, RngState};
pub use error::{Error, Result};
