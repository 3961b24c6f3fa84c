//! Blocked QR with randomized block pivoting, and its rank-revealing variant.
//!
//! Both algorithms drive `A` to upper triangular form one panel of `b`
//! columns at a time. Before each panel a pivot transform is chosen from a
//! Gaussian sketch of the trailing block and applied from the right; the
//! panel is then factored (pivoted QR, or QR followed by a small SVD in the
//! rank-revealing variant) and its orthogonal factor is applied to the
//! trailing columns in compact-WY form. Orthogonal factors are stored per
//! panel and never expanded during the sweep.

use crate::dense::{Matrix, RngState};
use crate::error::{Error, Result};
use crate::householder::{qr_column_pivoted, qr_tall_pivoted, qr_unpivoted, WYFactor};
use crate::instrument;
use crate::pivot::{
    build_sketch, select_pivot_permutation, select_pivot_reflectors, PivotTransform, SketchConfig,
};
use crate::svd::svd_full;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotKind {
    Permutation,
    Reflectors,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorizationKind {
    /// Classical single-vector column pivoting.
    ColumnPivoted,
    Svd,
    /// Blocked QR, pivots chosen as columns.
    PermutationPivot,
    /// Blocked QR, pivots chosen as reflector products.
    ReflectorPivot,
    /// Blocked rank-revealing QR with diagonal diagonal blocks.
    Rrqr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockConfig {
    pub block: usize,
    pub oversample: usize,
    pub power: usize,
    pub orthonormalize_between_powers: bool,
    pub pivot: PivotKind,
    pub rrqr: bool,
}

impl BlockConfig {
    pub fn new(block: usize, pivot: PivotKind, oversample: usize, power: usize) -> Self {
        let sketch = SketchConfig::new(block, oversample, power);
        Self {
            block,
            oversample,
            power,
            orthonormalize_between_powers: sketch.orthonormalize_between_powers,
            pivot,
            rrqr: false,
        }
    }

    /// Column pivots, no over-sampling.
    pub fn method1(block: usize, power: usize) -> Self {
        Self::new(block, PivotKind::Permutation, 0, power)
    }

    /// Reflector pivots, no over-sampling.
    pub fn method2(block: usize, power: usize) -> Self {
        Self::new(block, PivotKind::Reflectors, 0, power)
    }

    /// Rank-revealing sweep with over-sampling of half the block size.
    pub fn method3(block: usize, power: usize) -> Self {
        Self {
            rrqr: true,
            ..Self::new(block, PivotKind::Reflectors, block / 2, power)
        }
    }

    pub fn validate(&self, rows: usize, cols: usize) -> Result<()> {
        if rows < cols {
            return Err(Error::dim(
                "block factorization",
                format!("needs rows >= cols, got {rows}x{cols}"),
            ));
        }
        if self.block == 0 || self.block > cols {
            return Err(Error::InvalidArgument(format!(
                "block size {} outside 1..={cols}",
                self.block
            )));
        }
        Ok(())
    }

    /// Sketch for a panel of width `width` taken from `cols` trailing
    /// columns. Over-sampling is clipped to the columns available.
    fn sketch_for(&self, width: usize, cols: usize) -> SketchConfig {
        SketchConfig {
            block: width,
            oversample: self.oversample.min(cols - width),
            power: self.power,
            orthonormalize_between_powers: self.orthonormalize_between_powers,
        }
    }
}

/// Left factor of one panel: `U = (I + W·Y)·(inner ⊕ I)` acting on rows
/// `offset..m`. `inner` is the small left singular factor of a diagonalized
/// panel.
#[derive(Clone, Debug)]
pub struct LeftTransform {
    pub offset: usize,
    pub wy: WYFactor,
    pub inner: Option<Matrix>,
}

impl LeftTransform {
    pub fn dim(&self) -> usize {
        self.wy.dim()
    }

    /// `X ← Uᵀ·X` for a block with `dim()` rows.
    pub fn apply_transpose(&self, x: &mut Matrix) -> Result<()> {
        self.wy.apply_left_in_place(x, true)?;
        if let Some(inner) = &self.inner {
            let k = inner.rows();
            let top = x.submatrix(0..k, 0..x.cols());
            x.set_submatrix(0, 0, &inner.t_matmul(&top)?);
        }
        Ok(())
    }

    /// `Q(:, offset..) ← Q(:, offset..)·U`.
    pub fn apply_right(&self, q: &mut Matrix) -> Result<()> {
        let cols = self.offset..self.offset + self.dim();
        let mut block = q.submatrix(0..q.rows(), cols);
        self.wy.apply_right_in_place(&mut block, false)?;
        if let Some(inner) = &self.inner {
            let k = inner.rows();
            let lead = block.submatrix(0..block.rows(), 0..k);
            block.set_submatrix(0, 0, &lead.matmul(inner)?);
        }
        q.set_submatrix(0, self.offset, &block);
        Ok(())
    }
}

/// Right factor acting on columns `offset..offset + pivot.dim()`.
#[derive(Clone, Debug)]
pub struct RightTransform {
    pub offset: usize,
    pub pivot: PivotTransform,
}

/// `A·P = Q·R` with `Q` and `P` kept as ordered lists of panel transforms.
///
/// `Q = Q₁·Q₂·…` and `P = P₁·P₂·…`, each factor embedded as `I ⊕ T` at its
/// offset. `r` is `m × n` and upper triangular with exact zeros below the
/// diagonal.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub q_transforms: Vec<LeftTransform>,
    pub p_transforms: Vec<RightTransform>,
    pub r: Matrix,
    pub m: usize,
    pub n: usize,
    pub block: usize,
    pub kind: FactorizationKind,
}

impl Factorization {
    /// Classical column-pivoted QR packaged as a factorization.
    pub fn column_pivoted(a: &Matrix) -> Result<Self> {
        let (m, n) = a.shape();
        let qr = qr_column_pivoted(a, m.min(n))?;
        Ok(Self {
            q_transforms: vec![LeftTransform {
                offset: 0,
                wy: qr.wy(),
                inner: None,
            }],
            p_transforms: vec![RightTransform {
                offset: 0,
                pivot: PivotTransform::Permutation(qr.perm_or_identity()),
            }],
            r: qr.r,
            m,
            n,
            block: n,
            kind: FactorizationKind::ColumnPivoted,
        })
    }

    /// The SVD `A·V = U·D` packaged as a factorization, for `rows ≥ cols`.
    pub fn svd(a: &Matrix) -> Result<Self> {
        let (m, n) = a.shape();
        let ps = panel_svd(a)?;
        let mut r = Matrix::zeros(m, n);
        r.set_submatrix(0, 0, &Matrix::from_diag(&ps.d));
        Ok(Self {
            q_transforms: vec![ps.left(0)],
            p_transforms: vec![RightTransform {
                offset: 0,
                pivot: PivotTransform::Orthogonal(ps.v),
            }],
            r,
            m,
            n,
            block: n,
            kind: FactorizationKind::Svd,
        })
    }

    pub fn abs_diag(&self) -> Vec<f64> {
        self.r.diag().into_iter().map(f64::abs).collect()
    }

    /// Dense `m × m` orthogonal factor.
    pub fn expand_q(&self) -> Result<Matrix> {
        instrument::record_dense_expansion();
        let mut q = Matrix::identity(self.m);
        for t in &self.q_transforms {
            t.apply_right(&mut q)?;
        }
        Ok(q)
    }

    /// Dense `n × n` orthogonal right factor.
    pub fn expand_p(&self) -> Result<Matrix> {
        instrument::record_dense_expansion();
        let mut p = Matrix::identity(self.n);
        for t in &self.p_transforms {
            t.pivot.apply_right(&mut p, t.offset)?;
        }
        Ok(p)
    }

    /// The composed column order when every right factor is a permutation.
    pub fn column_order(&self) -> Option<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.n).collect();
        for t in &self.p_transforms {
            let PivotTransform::Permutation(local) = &t.pivot else {
                return None;
            };
            let seg: Vec<usize> = local.iter().map(|&j| order[t.offset + j]).collect();
            order[t.offset..t.offset + seg.len()].copy_from_slice(&seg);
        }
        Some(order)
    }
}

/// SVD of a tall panel in two stages: `panel = Q̃·[R; 0]`, then `R = U′·D·Ṽᵀ`,
/// giving `panel = Ũ·[D; 0]·Ṽᵀ` with `Ũ = Q̃·(U′ ⊕ I)`.
#[derive(Clone, Debug)]
pub struct PanelSvd {
    pub q: WYFactor,
    pub u_small: Matrix,
    pub d: Vec<f64>,
    pub v: Matrix,
}

impl PanelSvd {
    pub fn left(self: &PanelSvd, offset: usize) -> LeftTransform {
        LeftTransform {
            offset,
            wy: self.q.clone(),
            inner: Some(self.u_small.clone()),
        }
    }
}

pub fn panel_svd(panel: &Matrix) -> Result<PanelSvd> {
    let (m, b) = panel.shape();
    if m < b {
        return Err(Error::dim(
            "panel_svd",
            format!("panel {m}x{b} has fewer rows than columns"),
        ));
    }
    let qr = qr_unpivoted(panel)?;
    let s = svd_full(&qr.r.submatrix(0..b, 0..b))?;
    Ok(PanelSvd {
        q: qr.wy(),
        u_small: s.u,
        d: s.d,
        v: s.v,
    })
}

/// Panel-by-panel driver shared by [`block_qr`] and [`block_rrqr`].
///
/// Exposed so callers can inspect the partially reduced matrix between
/// panels.
pub struct BlockSweep<'r> {
    r: Matrix,
    cfg: BlockConfig,
    rng: &'r mut RngState,
    next_col: usize,
    q_transforms: Vec<LeftTransform>,
    p_transforms: Vec<RightTransform>,
}

impl<'r> BlockSweep<'r> {
    pub fn new(a: &Matrix, cfg: BlockConfig, rng: &'r mut RngState) -> Result<Self> {
        cfg.validate(a.rows(), a.cols())?;
        if !a.is_finite() {
            return Err(Error::NonFinite);
        }
        let cfg = if cfg.rrqr {
            BlockConfig {
                pivot: PivotKind::Reflectors,
                ..cfg
            }
        } else {
            cfg
        };
        Ok(Self {
            r: a.clone(),
            cfg,
            rng,
            next_col: 0,
            q_transforms: Vec::new(),
            p_transforms: Vec::new(),
        })
    }

    /// The partially reduced matrix `Qᵀ·A·P` so far.
    pub fn current(&self) -> &Matrix {
        &self.r
    }

    /// Columns already reduced.
    pub fn done(&self) -> usize {
        self.next_col
    }

    pub fn is_finished(&self) -> bool {
        self.next_col == self.r.cols()
    }

    /// Processes one panel. Returns `false` once nothing is left.
    pub fn step(&mut self) -> Result<bool> {
        let (m, n) = self.r.shape();
        let c0 = self.next_col;
        if c0 == n {
            return Ok(false);
        }
        let w = self.cfg.block.min(n - c0);
        let last = c0 + w == n;

        // Randomized block pivot from the trailing block; the final block is
        // factored directly.
        if !last {
            let x = self.r.submatrix(c0..m, c0..n);
            let sketch_cfg = self.cfg.sketch_for(w, n - c0);
            let y = build_sketch(&x, &sketch_cfg, self.rng)?;
            let pivot = match self.cfg.pivot {
                PivotKind::Permutation => select_pivot_permutation(&y, w)?,
                PivotKind::Reflectors => select_pivot_reflectors(&y, w)?,
            };
            pivot.apply_right(&mut self.r, c0)?;
            self.p_transforms.push(RightTransform { offset: c0, pivot });
        }

        let panel = self.r.submatrix(c0..m, c0..n.min(c0 + w));
        let (left, inner_right, diag_block) = if self.cfg.rrqr {
            let ps = panel_svd(&panel)?;
            let left = ps.left(c0);
            (
                left,
                PivotTransform::Orthogonal(ps.v),
                Matrix::from_diag(&ps.d),
            )
        } else {
            let qr = qr_tall_pivoted(&panel)?;
            let left = LeftTransform {
                offset: c0,
                wy: qr.wy(),
                inner: None,
            };
            let perm = PivotTransform::Permutation(qr.perm_or_identity());
            (left, perm, qr.r.submatrix(0..w, 0..w))
        };

        if !last {
            let mut trailing = self.r.submatrix(c0..m, c0 + w..n);
            left.apply_transpose(&mut trailing)?;
            self.r.set_submatrix(c0, c0 + w, &trailing);
        }
        if c0 > 0 {
            let mut above = self.r.submatrix(0..c0, c0..c0 + w);
            inner_right.apply_right(&mut above, 0)?;
            self.r.set_submatrix(0, c0, &above);
        }
        let mut reduced = Matrix::zeros(m - c0, w);
        reduced.set_submatrix(0, 0, &diag_block);
        self.r.set_submatrix(c0, c0, &reduced);

        self.q_transforms.push(left);
        self.p_transforms.push(RightTransform {
            offset: c0,
            pivot: inner_right,
        });
        self.next_col += w;
        Ok(true)
    }

    pub fn finish(mut self) -> Result<Factorization> {
        while self.step()? {}
        let kind = match (self.cfg.rrqr, self.cfg.pivot) {
            (true, _) => FactorizationKind::Rrqr,
            (false, PivotKind::Permutation) => FactorizationKind::PermutationPivot,
            (false, PivotKind::Reflectors) => FactorizationKind::ReflectorPivot,
        };
        let (m, n) = self.r.shape();
        Ok(Factorization {
            q_transforms: self.q_transforms,
            p_transforms: self.p_transforms,
            r: self.r,
            m,
            n,
            block: self.cfg.block,
            kind,
        })
    }
}

/// Blocked QR with randomized block pivoting. `cfg.rrqr` is ignored.
pub fn block_qr(a: &Matrix, cfg: BlockConfig, rng: &mut RngState) -> Result<Factorization> {
    BlockSweep::new(a, BlockConfig { rrqr: false, ..cfg }, rng)?.finish()
}

/// Blocked rank-revealing QR: reflector pivots from a power-iterated sketch
/// and a diagonalized panel at every step.
pub fn block_rrqr(a: &Matrix, cfg: BlockConfig, rng: &mut RngState) -> Result<Factorization> {
    BlockSweep::new(a, BlockConfig { rrqr: true, ..cfg }, rng)?.finish()
}

/// Dispatches on `cfg.rrqr`.
pub fn factorize(a: &Matrix, cfg: BlockConfig, rng: &mut RngState) -> Result<Factorization> {
    BlockSweep::new(a, cfg, rng)?.finish()
}
