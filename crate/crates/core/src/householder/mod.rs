//! Householder reflectors, compact-WY products and QR factorizations.

mod qr;
mod reflector;
mod wy;

pub use qr::{qr_column_pivoted, qr_tall_pivoted, qr_unpivoted, QrResult};
pub use reflector::{reflector_from_vector, Reflector};
pub use wy::{apply_wy_left, apply_wy_right, wy_accumulate, WYFactor};
