use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand};
use randqr::bench::{
    run_experiment, run_suite, write_suite, ExperimentResult, MatrixKind, Method, RankGrid,
    SuiteConfig, TestMatrixSpec,
};
use randqr::{Error, RngState};

#[derive(Parser, Debug)]
#[command(
    name = "randqr",
    version,
    about = "Seeded truncation-error experiments for randomized blocked QR"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one (matrix, method, q) cell and write its CSV.
    Run(RunArgs),
    /// Run every cell on all three test matrices.
    Suite(SuiteArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(["fast", "gauss", "sshape"])
        .map(|s| s.parse::<MatrixKind>().expect("listed value")))]
    matrix: MatrixKind,
    #[arg(long, default_value_t = 300)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    block: usize,
    #[arg(long, value_parser = PossibleValuesParser::new(["cpqr", "svd", "m1", "m2", "m3"])
        .map(|s| s.parse::<Method>().expect("listed value")))]
    method: Method,
    /// Power iterations; ignored by cpqr and svd.
    #[arg(long, default_value_t = 0)]
    q: usize,
    /// Over-sampling; defaults to 0 for m1/m2 and block/2 for m3.
    #[arg(long)]
    oversample: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Report every rank instead of multiples of the block size.
    #[arg(long)]
    full: bool,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(long, default_value_t = 300)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    block: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    full: bool,
}

fn grid(full: bool) -> RankGrid {
    if full {
        RankGrid::Full
    } else {
        RankGrid::Blocks
    }
}

fn report(result: &ExperimentResult, path: &std::path::Path) {
    println!(
        "{}: max | |R(k,k)|/sigma_k - 1 | = {:.4}",
        path.display(),
        result.diag.max_ratio_deviation()
    );
}

fn run(args: RunArgs) -> randqr::Result<()> {
    let spec = TestMatrixSpec::new(args.matrix, args.n, args.seed);
    let mut cfg = args.method.default_config(args.block, args.q);
    if let Some(r) = args.oversample {
        cfg.oversample = r;
    }
    let mut rng = RngState::new(args.seed);
    let result = run_experiment(&spec, args.method, &cfg, &mut rng, grid(args.full))?;
    let path = result.write_csv(&args.out)?;
    report(&result, &path);
    Ok(())
}

fn suite(args: SuiteArgs) -> randqr::Result<()> {
    let cfg = SuiteConfig {
        n: args.n,
        block: args.block,
        seed: args.seed,
        grid: grid(args.full),
    };
    let results = run_suite(&cfg)?;
    let paths = write_suite(&results, &args.out)?;
    for (result, path) in results.iter().zip(&paths) {
        report(result, path);
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NoConvergence { .. } | Error::NonFinite => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Suite(args) => suite(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("randqr: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
