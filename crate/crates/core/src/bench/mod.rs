//! Test matrices, truncation metrics and the CSV experiment driver.

mod experiment;
mod matrices;
mod metrics;

pub use experiment::{
    csv_file_name, factor_with, run_experiment, run_suite, suite_cells, write_suite,
    ExperimentResult, Method, RankGrid, SuiteConfig,
};
pub use matrices::{
    fast_spectrum, gen_matrix, random_orthogonal, sshape_spectrum, with_spectrum, MatrixKind,
    TestMatrixSpec,
};
pub use metrics::{
    block_ranks, diag_comparison, diag_comparison_for, svd_error_curve, truncation_errors,
    DiagComparison, ErrorCurve,
};
