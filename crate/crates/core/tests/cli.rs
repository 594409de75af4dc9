use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nevanlinna")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn built(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.join(name);
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", p.to_str().unwrap()]);
    let o = run(&full);
    assert!(o.status.success(), "{}", stderr(&o));
    p
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn mfun_single_point() {
    let dir = TempDir::new().unwrap();
    let j = built(dir.path(), "jhat0.json", &["jhat0", "--n", "2"]);
    let o = run(&["mfun", j.to_str().unwrap(), "--lambda", "0,2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("re_lambda,im_lambda,re_m00,im_m00"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    // −λ/(λ² − 1) at 2i
    assert!(rows[0][2].abs() < 1e-15);
    assert!((rows[0][3] - 0.4).abs() < 1e-15);
}

#[test]
fn mfun_grid_shape_and_floor() {
    let dir = TempDir::new().unwrap();
    let j = built(dir.path(), "j0.json", &["j0", "--d", "2", "--n", "6"]);
    let o = run(&["mfun", j.to_str().unwrap(), "--grid", "-1:1:3,0.5:1.5:4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.len() == 10));

    let o = run(&["mfun", j.to_str().unwrap(), "--grid", "-1:1:3,-1:1:3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("grid violates half-plane floor"));
}

#[test]
fn malformed_input_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"d\": 1, \"a\": [[[0.0");
    let o = run(&["mfun", bad.to_str().unwrap(), "--lambda", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["mfun", dir.path().join("missing.json").to_str().unwrap(), "--lambda", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn iterate_from_zero() {
    let o = run(&["iterate", "zero", "--lambda", "0,2", "--n", "10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    let residual: f64 = last.split(',').nth(3).unwrap().parse().unwrap();
    assert!(residual < 1e-6, "{last}");
    assert_eq!(text.lines().count(), 11);

    let o = run(&["iterate", "zero", "--lambda", "0,2", "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn iterate_warns_on_bad_start() {
    let dir = TempDir::new().unwrap();
    // negative mass: not a Nevanlinna function
    let start = write(dir.path(), "start.json", r#"{"variant":"measure","dim":1,"a":[[[0.0,0.0]]],"b":[[[0.0,0.0]]],"atoms":[{"t":0.0,"w":[[[-1.0,0.0]]]}]}"#);
    let o = run(&["iterate", start.to_str().unwrap(), "--lambda", "0,2", "--n", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
}

#[test]
fn kac_outputs() {
    let dir = TempDir::new().unwrap();
    let j = built(dir.path(), "jhat0.json", &["jhat0", "--n", "12"]);
    let o = run(&["kac", j.to_str().unwrap(), "--n", "8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let bps: Vec<f64> = serde_json::from_value(v["breakpoints"].clone()).unwrap();
    assert_eq!(bps.len(), 9);
    for (k, t) in bps.iter().enumerate() {
        assert!((t - k as f64).abs() < 1e-12);
    }

    let variant = write(dir.path(), "a1.json", r#"{"d":1,"a":[[[[1.0,0.0]]],[[[0.0,0.0]]],[[[0.0,0.0]]],[[[0.0,0.0]]]],"b":[[[[1.0,0.0]]],[[[1.0,0.0]]],[[[1.0,0.0]]]]}"#);
    let o = run(&["kac", variant.to_str().unwrap(), "--n", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let bps: Vec<f64> = serde_json::from_value(v["breakpoints"].clone()).unwrap();
    assert!((bps[2] - bps[1] - 2.0).abs() < 1e-12);

    let block = built(dir.path(), "j2.json", &["jhat0", "--d", "2", "--n", "4"]);
    assert_eq!(run(&["kac", block.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn weyl_on_kac_output() {
    let dir = TempDir::new().unwrap();
    let j = built(dir.path(), "jhat0.json", &["jhat0", "--n", "80"]);
    let h = dir.path().join("h.json");
    assert!(run(&["kac", j.to_str().unwrap(), "--out", h.to_str().unwrap()]).status.success());
    let o = run(&["weyl", h.to_str().unwrap(), "--lambda", "0,2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m = v["m"][1].as_f64().unwrap();
    assert!((m - (2f64.sqrt() - 1.0)).abs() < 1e-6);
}

#[test]
fn verify_suites() {
    for suite in ["fixed-points", "wollen", "kac-canonical"] {
        let o = run(&["verify", suite]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
    }
    let o = run(&["verify", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
    let listing = format!("{}{}", stdout(&o), stderr(&o));
    assert!(listing.contains("hamiltonian-scheme"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = built(dir.path(), "a.json", &["random-interval", "--d", "2", "--n", "5", "--seed", "9"]);
    let b = built(dir.path(), "b.json", &["random-interval", "--d", "2", "--n", "5", "--seed", "9"]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let first = run(&["iterate", a.to_str().unwrap(), "--lambda", "0.5,-1", "--n", "6"]);
    let second = run(&["iterate", a.to_str().unwrap(), "--lambda", "0.5,-1", "--n", "6"]);
    assert!(first.status.success(), "{}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
}
