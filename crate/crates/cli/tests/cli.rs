use std::path::Path;
use std::process::{Command, Output};

use rootpow::accuracy::{default_sweep_lambdas, DEFAULT_N, DEFAULT_X_HI, DEFAULT_X_LO};
use rootpow::distribution::ZTable;
use rootpow::kernel::{kernel, KernelParams};
use rootpow::{transform, Lambda};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootpow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn write_data(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn eval_identity_on_a_range() {
    let out = stdout(&run(&["eval", "--fn", "f", "--lambda", "0", "--x", "0:1:3"]));
    assert_eq!(out, "x,value\n0.0,0.0\n0.5,0.5\n1.0,1.0\n");
}

#[test]
fn eval_values_parse_back_to_library_values() {
    let out = stdout(&run(&["eval", "--fn", "k", "--lambda", "-inf", "--x", "1"]));
    let value: f64 = rows(&out)[0][1].parse().unwrap();
    assert_eq!(value, (-0.5f64).exp());

    let out = stdout(&run(&["eval", "--fn", "f", "--lambda", "-1.7", "--x", "0:40:97"]));
    for row in rows(&out) {
        let x: f64 = row[0].parse().unwrap();
        let v: f64 = row[1].parse().unwrap();
        assert_eq!(v.to_bits(), transform(x, Lambda::new(-1.7).unwrap()).unwrap().to_bits());
    }

    let out = stdout(&run(&["eval", "--fn", "k", "--lambda", "-2", "--c", "0.3", "--x", "0.1,2,-7"]));
    let params = KernelParams::new(Lambda::new(-2.0).unwrap(), 0.3).unwrap();
    for row in rows(&out) {
        let x: f64 = row[0].parse().unwrap();
        assert_eq!(row[1].parse::<f64>().unwrap(), kernel(x, &params));
    }
}

#[test]
fn eval_spells_out_non_finite_values() {
    let out = stdout(&run(&["eval", "--fn", "f", "--lambda", "1", "--x", "1000"]));
    assert_eq!(rows(&out)[0][1], "inf");
}

#[test]
fn eval_rejects_invalid_parameters() {
    for args in [
        &["eval", "--fn", "bump", "--lambda", "1", "--x", "0"][..],
        &["eval", "--fn", "pdf", "--lambda", "-2", "--x", "0"],
        &["eval", "--fn", "rho", "--lambda", "0", "--c", "0", "--x", "1"],
        &["eval", "--fn", "h", "--lambda", "inf", "--x", "0"],
    ] {
        let out = run(args);
        assert!(!out.status.success(), "{args:?} succeeded");
        assert!(out.stdout.is_empty());
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
    for bad in [&["--lambda", "nan", "--x", "0"][..], &["--lambda", "0", "--x", "0:1:0"]] {
        let out = run(&[&["eval", "--fn", "f"][..], bad].concat());
        assert!(!out.status.success());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn accuracy_default_run_shows_dominance() {
    let out = stdout(&run(&["accuracy"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("lambda,err_naive,err_stable"));
    let body: Vec<_> = lines.collect();
    assert_eq!(body.len(), default_sweep_lambdas().len());
    for line in body {
        let cols: Vec<_> = line.split(',').collect();
        let stable: f64 = cols[2].parse().unwrap();
        if !cols[1].is_empty() {
            let naive: f64 = cols[1].parse().unwrap();
            assert!(stable <= naive * (1.0 + 1e-3), "{line}");
        }
    }
    assert_eq!((DEFAULT_X_LO, DEFAULT_X_HI, DEFAULT_N), (0.01, 1.0, 1000));
}

#[test]
fn accuracy_marks_stable_only_rows() {
    let out = stdout(&run(&["accuracy", "--lambdas", "0,inf,-0.5", "--n", "50"]));
    let r = rows(&out);
    assert_eq!(r.len(), 3);
    assert_eq!(r[0][0], "-0.5");
    assert!(!r[0][1].is_empty());
    for row in &r[1..] {
        assert!(row[1].is_empty(), "{row:?}");
    }
}

#[test]
fn ztable_is_reproducible_and_serves_pdf() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&["ztable", "--grid-size", "64", "--num-points", "1025", "--output", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let table = ZTable::read_from(bytes.as_slice()).unwrap();
    assert_eq!(table.len(), 64);

    let default = dir.path().join("default.json");
    assert!(run(&["ztable", "--output", default.to_str().unwrap()]).status.success());
    let out = stdout(&run(&[
        "eval", "--fn", "pdf", "--lambda", "0", "--x", "0", "--ztable", default.to_str().unwrap(),
    ]));
    let v: f64 = rows(&out)[0][1].parse().unwrap();
    let want = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    assert!(((v - want) / want).abs() <= 1e-6);
}

#[test]
fn ztable_rejects_small_grids_and_bad_paths() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    assert!(!run(&["ztable", "--grid-size", "8", "--output", path.to_str().unwrap()]).status.success());
    assert!(!path.exists());
    let missing = dir.path().join("no/such/dir/t.json");
    assert!(!run(&["ztable", "--grid-size", "16", "--num-points", "65", "--output", missing.to_str().unwrap()])
        .status
        .success());
}

#[test]
fn irls_fits_and_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_data(dir.path(), "d.csv", "1\n2\n3\n");
    let out = stdout(&run(&["irls", "--data", &data, "--lambda", "0"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mu"].as_f64(), Some(2.0));
    assert_eq!(v["converged"].as_bool(), Some(true));

    let data = write_data(dir.path(), "o.csv", "value\n0\n0\n10\n");
    let out = stdout(&run(&["irls", "--data", &data, "--header", "--lambda", "-inf", "--tol", "1e-12"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["mu"].as_f64().unwrap().abs() <= 1e-8);
    assert_eq!(v["converged"].as_bool(), Some(true));
}

#[test]
fn irls_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_data(dir.path(), "d.csv", "0.3\n1.7\n2.2\n9\n-4\n");
    let out = run(&["irls", "--data", &data, "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["irls", "--data", &data, "--lambda", "-0.5", "--max-iters", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["converged"].as_bool(), Some(false));
    assert_eq!(v["iterations"].as_u64(), Some(1));

    let bad = write_data(dir.path(), "bad.csv", "1\n2\nthree\n");
    let out = run(&["irls", "--data", &bad, "--lambda", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));

    let out = run(&["irls", "--data", dir.path().join("missing.csv").to_str().unwrap(), "--lambda", "-1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let args = ["eval", "--fn", "pdf", "--lambda", "2.5", "--c", "0.7", "--x", "-3:3:41"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}
