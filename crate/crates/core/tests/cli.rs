use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    let config = dir.join("config.json");
    fs::write(
        &config,
        r#"{"n_cellular": 3, "n_d2d_pairs": 3, "n_channels": 2, "n_trials": 4}"#,
    )
    .unwrap();
    Command::new(env!("CARGO_BIN_EXE_hyperalloc"))
        .args(args)
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, rows)
}

#[test]
fn simulate_writes_capacity_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["simulate", "--seed", "9", "--algos", "graph,hypergraph,no-d2d"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("out/capacity.csv"));
    assert_eq!(header[0], "param_value");
    assert_eq!(rows.len(), 3);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("hypergraph") && stdout.contains("no-d2d"));
}

#[test]
fn sweep_writes_one_row_per_point_and_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["sweep", "--param", "M", "--values", "1,2,3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join("out/capacity.csv"));
    assert_eq!(rows.len(), 6);
    let values: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(values, ["1", "1", "2", "2", "3", "3"]);
}

#[test]
fn same_seed_same_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        assert!(run(dir.path(), &["cdf", "--seed", "5"]).status.success());
    }
    let read = |d: &tempfile::TempDir| fs::read_to_string(d.path().join("out/cdf.csv")).unwrap();
    let (header, rows) = read_csv(&a.path().join("out/cdf.csv"));
    assert_eq!(header, ["algorithm", "ue_class", "throughput_bps_hz"]);
    assert_eq!(rows.len(), 2 * 4 * 6);
    assert_eq!(read(&a), read(&b));
}

#[test]
fn oracle_compare_and_op_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["oracle-compare"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join("out/capacity.csv"));
    assert_eq!(rows.len(), 3);

    let out = run(dir.path(), &["op-counts", "--sizes", "4,8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("out/op_counts.csv"));
    assert_eq!(header, ["n_plus_m", "algorithm", "phase", "op_count"]);
    assert_eq!(rows.len(), 2 * 2 * 3);
    assert!(String::from_utf8_lossy(&out.stdout).contains("log-log slope"));
}

#[test]
fn bad_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["sweep", "--param", "Z", "--values", "1"][..],
        &["simulate", "--algos", "magic"],
        &["simulate", "--algos", ""],
    ] {
        let out = run(dir.path(), args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
}
