use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::Matrix;
use crate::error::{Error, Result};

/// Seeded source of Gaussian samples.
///
/// The stream is ChaCha8 keyed by `seed_from_u64(seed)`, with normals drawn
/// through the ziggurat sampler of `rand_distr::StandardNormal`. Both are
/// platform independent, so the same seed yields the same bits everywhere.
#[derive(Clone, Debug)]
pub struct RngState {
    seed: u64,
    rng: ChaCha8Rng,
    draws: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            draws: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of normal samples produced so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn next_normal(&mut self) -> f64 {
        self.draws += 1;
        self.rng.sample(StandardNormal)
    }
}

/// `rows × cols` matrix of i.i.d. standard normals, filled column by column.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut RngState) -> Result<Matrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::dim(
            "gaussian_matrix",
            format!("requested {rows}x{cols}"),
        ));
    }
    let data = (0..rows * cols).map(|_| rng.next_normal()).collect();
    Matrix::from_col_major(rows, cols, data)
}
