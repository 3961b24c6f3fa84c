use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::matrices::{gen_matrix, MatrixKind, TestMatrixSpec};
use super::metrics::{block_ranks, diag_comparison, truncation_errors, DiagComparison, ErrorCurve};
use crate::block::{factorize, BlockConfig, Factorization, PivotKind};
use crate::dense::{Matrix, RngState};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Cpqr,
    Svd,
    M1,
    M2,
    M3,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Cpqr,
        Method::Svd,
        Method::M1,
        Method::M2,
        Method::M3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cpqr => "cpqr",
            Method::Svd => "svd",
            Method::M1 => "m1",
            Method::M2 => "m2",
            Method::M3 => "m3",
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Method::M1 | Method::M2 | Method::M3)
    }

    /// Default blocking for the method. Method 3 over-samples by `b/2`.
    pub fn default_config(self, block: usize, power: usize) -> BlockConfig {
        match self {
            Method::M2 => BlockConfig::method2(block, power),
            Method::M3 => BlockConfig::method3(block, power),
            _ => BlockConfig::method1(block, power),
        }
    }

    fn check_config(self, cfg: &BlockConfig) -> Result<()> {
        let ok = match self {
            Method::Cpqr | Method::Svd => true,
            Method::M1 => cfg.pivot == PivotKind::Permutation && !cfg.rrqr,
            Method::M2 => cfg.pivot == PivotKind::Reflectors && !cfg.rrqr,
            Method::M3 => cfg.pivot == PivotKind::Reflectors && cfg.rrqr,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "configuration {cfg:?} does not match method {self}"
            )))
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub spec: TestMatrixSpec,
    pub method: Method,
    pub power: usize,
    pub curve: ErrorCurve,
    pub diag: DiagComparison,
}

impl ExperimentResult {
    pub fn file_name(&self) -> String {
        csv_file_name(self.spec.kind, self.method, self.power)
    }

    /// CSV text: one row per reported rank, `r_diag`/`sigma` hold entry `k`
    /// (1-based) and are empty at `k = 0`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,spectral_err,frobenius_err,r_diag,sigma\n");
        for (i, &k) in self.curve.ks.iter().enumerate() {
            let _ = write!(
                out,
                "{k},{:.16e},{:.16e},",
                self.curve.spectral[i], self.curve.frobenius[i]
            );
            if k > 0 && k <= self.diag.r_abs.len() {
                let _ = write!(
                    out,
                    "{:.16e},{:.16e}",
                    self.diag.r_abs[k - 1],
                    self.diag.sigma[k - 1]
                );
            } else {
                out.push(',');
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(self.file_name());
        fs::write(&path, self.to_csv())?;
        Ok(path)
    }
}

pub fn csv_file_name(kind: MatrixKind, method: Method, power: usize) -> String {
    format!("{}_{}_q{}.csv", kind.name(), method.name(), power)
}

/// Ranks at which a curve is reported.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RankGrid {
    #[default]
    Blocks,
    Full,
}

impl RankGrid {
    pub fn ranks(self, n: usize, b: usize) -> Vec<usize> {
        match self {
            RankGrid::Blocks => block_ranks(n, b),
            RankGrid::Full => (0..=n).collect(),
        }
    }
}

/// Factors `a` with `method`. `cfg` is ignored by the deterministic baselines.
pub fn factor_with(
    a: &Matrix,
    method: Method,
    cfg: &BlockConfig,
    rng: &mut RngState,
) -> Result<Factorization> {
    method.check_config(cfg)?;
    match method {
        Method::Cpqr => Factorization::column_pivoted(a),
        Method::Svd => Factorization::svd(a),
        _ => factorize(a, *cfg, rng),
    }
}

/// Generates the test matrix from `rng`, then factors it with the same stream.
pub fn run_experiment(
    spec: &TestMatrixSpec,
    method: Method,
    cfg: &BlockConfig,
    rng: &mut RngState,
    grid: RankGrid,
) -> Result<ExperimentResult> {
    spec.validate()?;
    let (a, sigma) = gen_matrix(spec, rng)?;
    run_on_matrix(spec, &a, &sigma, method, cfg, rng, grid)
}

fn run_on_matrix(
    spec: &TestMatrixSpec,
    a: &Matrix,
    sigma: &[f64],
    method: Method,
    cfg: &BlockConfig,
    rng: &mut RngState,
    grid: RankGrid,
) -> Result<ExperimentResult> {
    cfg.validate(spec.n, spec.n)?;
    let f = factor_with(a, method, cfg, rng)?;
    let curve = truncation_errors(a, &f, &grid.ranks(spec.n, cfg.block), method.name())?;
    let diag = diag_comparison(&f, sigma);
    Ok(ExperimentResult {
        spec: *spec,
        method,
        power: if method.is_randomized() { cfg.power } else { 0 },
        curve,
        diag,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub n: usize,
    pub block: usize,
    pub seed: u64,
    pub grid: RankGrid,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 300,
            block: 50,
            seed: 1,
            grid: RankGrid::Blocks,
        }
    }
}

/// The (method, q) cells of the suite for one matrix.
pub fn suite_cells() -> Vec<(Method, usize)> {
    let mut cells = vec![(Method::Cpqr, 0), (Method::Svd, 0), (Method::M1, 0)];
    for m in [Method::M2, Method::M3] {
        cells.extend((0..=2).map(|q| (m, q)));
    }
    cells
}

/// Runs every cell on all three matrices. Each matrix is generated once; every
/// cell factors it with its own copy of the post-generation stream.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<ExperimentResult>> {
    let mut results = Vec::new();
    for kind in MatrixKind::ALL {
        let spec = TestMatrixSpec::new(kind, cfg.n, cfg.seed);
        spec.validate()?;
        let mut rng = RngState::new(cfg.seed);
        let (a, sigma) = gen_matrix(&spec, &mut rng)?;
        for (method, q) in suite_cells() {
            let bc = method.default_config(cfg.block, q);
            let mut cell_rng = rng.clone();
            results.push(run_on_matrix(
                &spec,
                &a,
                &sigma,
                method,
                &bc,
                &mut cell_rng,
                cfg.grid,
            )?);
        }
    }
    Ok(results)
}

pub fn write_suite(results: &[ExperimentResult], dir: &Path) -> Result<Vec<PathBuf>> {
    results.iter().map(|r| r.write_csv(dir)).collect()
}
