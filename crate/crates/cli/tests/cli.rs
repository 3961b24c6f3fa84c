use std::fs;
use std::process::Command;

fn randqr() -> Command {
    Command::new(env!("CARGO_BIN_EXE_randqr"))
}

fn run_cell(dir: &std::path::Path, extra: &[&str]) -> std::process::Output {
    randqr()
        .args([
            "run", "--matrix", "fast", "--n", "24", "--block", "6", "--method", "m3", "--q", "1",
        ])
        .args(["--seed", "7", "--out"])
        .arg(dir)
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn run_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_cell(dir.path(), &[]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("fast_m3_q1.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("k,spectral_err,frobenius_err,r_diag,sigma")
    );
    let ks: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ks, ["0", "6", "12", "18", "24"]);
}

#[test]
fn full_grid_reports_every_rank() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_cell(dir.path(), &["--full"]).status.success());
    let csv = fs::read_to_string(dir.path().join("fast_m3_q1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 25);
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run_cell(a.path(), &[]).status.success());
    assert!(run_cell(b.path(), &[]).status.success());
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("fast_m3_q1.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn argument_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_method = randqr()
        .args(["run", "--matrix", "fast", "--method", "m9", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(bad_method.status.code(), Some(2));

    // block larger than n is rejected by the configuration check
    let bad_block = randqr()
        .args([
            "run", "--matrix", "gauss", "--n", "8", "--block", "9", "--method", "m1", "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(bad_block.status.code(), Some(2));

    let tiny = randqr()
        .args([
            "run", "--matrix", "sshape", "--n", "1", "--block", "1", "--method", "cpqr", "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(tiny.status.code(), Some(2));
}

#[test]
fn suite_writes_every_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out = randqr()
        .args(["suite", "--n", "12", "--block", "4", "--seed", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names.len(), 27);
    assert!(names.contains(&"gauss_m3_q2.csv".to_string()));
    assert!(names.contains(&"sshape_cpqr_q0.csv".to_string()));
}
