use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gasp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gasp")).args(args).output().expect("failed to run gasp")
}

fn ok(args: &[&str]) -> String {
    let out = gasp(args);
    assert!(
        out.status.success(),
        "gasp {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

/// Rows of a field CSV as (x, y, re, im).
fn rows(csv: &str) -> Vec<[f64; 4]> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,tau,theta,re,im"));
    lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            [v[0], v[1], v[4], v[5]]
        })
        .collect()
}

fn value_at(dir: &TempDir, solution: &str, point: &str) -> (f64, f64) {
    let r = rows(&ok(&["evaluate", "--input", &path(dir, solution), "--point", point]));
    (r[0][2], r[0][3])
}

#[test]
fn disk_solution_reproduces_quadratic() {
    let dir = TempDir::new().unwrap();
    let sol = path(&dir, "sol.json");
    ok(&["solve-disk", "--m", "2,0", "--center", "5", "--radius", "3", "--trace", "quadratic", "--nmax", "32", "--out", &sol]);
    // x² − 3y² at (5, 0.2)
    let (re, im) = value_at(&dir, "sol.json", "5,0.2");
    assert!((re - 24.88).abs() <= 1e-8 * 24.88, "{re}");
    assert!(im.abs() <= 1e-10);
}

#[test]
fn gram_blocks_are_positive_definite() {
    let text = ok(&["gram", "--m", "-1,0", "--tau0", "0.5", "--tau1", "1.0", "--N", "64"]);
    let blocks: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(blocks.len(), 65);
    for b in &blocks {
        assert!(b["det"].as_f64().unwrap() > 0.0, "{b}");
        assert!(b["eig_min"].as_f64().unwrap() > 0.0, "{b}");
    }
}

#[test]
fn kernel_grid_matches_closed_form() {
    let text = ok(&["kernel", "--m", "0,0", "--source", "1,0", "--grid", "0.1:3:0.1,-2:2:0.1"]);
    let rows = rows(&text);
    assert_eq!(rows.len(), 30 * 41);
    let at = rows
        .iter()
        .find(|r| (r[0] - 2.0).abs() < 1e-9 && r[1].abs() < 1e-9)
        .expect("grid misses (2, 0)");
    let expected = -(9.0f64).ln() / (4.0 * std::f64::consts::PI);
    assert!((at[2] - expected).abs() <= 1e-12, "{}", at[2]);
    // The source itself is singular.
    let src = rows.iter().find(|r| (r[0] - 1.0).abs() < 1e-9 && r[1].abs() < 1e-9).unwrap();
    assert!(src[2].is_nan());
}

#[test]
fn annulus_decomposition_sums_back() {
    let dir = TempDir::new().unwrap();
    let (ann, int, ext) = (path(&dir, "ann.json"), path(&dir, "int.json"), path(&dir, "ext.json"));
    ok(&["solve-annulus", "--m", "-1,0", "--alpha", "1", "--tau0", "0.5", "--tau1", "1.0", "--trace", "quadratic", "--out", &ann]);
    ok(&["decompose", "--input", &ann, "--interior", &int, "--exterior", &ext]);
    for point in ["0.9,1.2", "0.36,0", "2.8,0", "0.48,0.53"] {
        let u = value_at(&dir, "ann.json", point);
        let v = value_at(&dir, "int.json", point);
        let w = value_at(&dir, "ext.json", point);
        let err = ((u.0 - v.0 - w.0).powi(2) + (u.1 - v.1 - w.1).powi(2)).sqrt();
        assert!(err <= 1e-8, "{point}: {err}");
    }
}

#[test]
fn trace_file_matches_named_reference() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("trace.csv");
    // Quadratic at m = −1 is x² on the circle τ = 0.5, α = 1.
    let mut text = String::from("theta,re,im\n");
    for j in 0..128 {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / 128.0;
        let d = 0.5f64.cosh() - theta.cos();
        let x = 0.5f64.sinh() / d;
        text.push_str(&format!("{theta:.17e},{:.17e},0\n", x * x));
    }
    std::fs::write(&csv_path, text).unwrap();
    let common = ["--m", "-1,0", "--alpha", "1", "--tau0", "0.5"];
    let a = ok(&[&["solve-disk"][..], &common, &["--trace", "quadratic"]].concat());
    let b = ok(&[&["solve-disk"][..], &common, &["--trace", csv_path.to_str().unwrap()]].concat());
    let (a, b): (serde_json::Value, serde_json::Value) = (serde_json::from_str(&a).unwrap(), serde_json::from_str(&b).unwrap());
    let qa = a["q_coeffs"].as_array().unwrap();
    let qb = b["q_coeffs"].as_array().unwrap();
    for (x, y) in qa.iter().zip(qb) {
        let d = (x[1].as_f64().unwrap() - y[1].as_f64().unwrap()).abs();
        assert!(d <= 1e-12, "{x} vs {y}");
    }
}

#[test]
fn config_file_supplies_flags_and_command_line_wins() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("gram.json");
    std::fs::write(&cfg, r#"{"m": [-1, 0], "tau0": 0.5, "tau1": 1.0, "N": 3}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let count = |s: &str| serde_json::from_str::<Vec<serde_json::Value>>(s).unwrap().len();
    assert_eq!(count(&ok(&["gram", "--config", cfg])), 4);
    assert_eq!(count(&ok(&["--config", cfg, "gram", "--N", "7"])), 8);
}

#[test]
fn output_is_deterministic() {
    let args = ["solve-exterior", "--m", "0.5,0.3", "--center", "4", "--radius", "2", "--trace", "constant"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn bad_input_exits_with_one() {
    assert_eq!(gasp(&["kernel", "--m", "0", "--source", "1,0", "--grid", "1:2:1,0:0:1", "--bogus"]).status.code(), Some(1));
    assert_eq!(gasp(&["gram", "--m", "1,x", "--tau0", "0.5", "--tau1", "1"]).status.code(), Some(1));
    assert_eq!(gasp(&["gram", "--m", "1", "--tau0", "1", "--tau1", "0.5"]).status.code(), Some(1));
    assert_eq!(gasp(&["evaluate", "--input", "/nonexistent/sol.json", "--point", "1,1"]).status.code(), Some(1));
    assert_eq!(gasp(&["solve-disk", "--m", "0", "--center", "5", "--trace", "constant"]).status.code(), Some(1));
    assert_eq!(gasp(&["poisson", "--m", "1.5", "--data", "gaussian", "--grid", "1:2:1,0:0:1"]).status.code(), Some(1));
}

#[test]
fn singular_mode_exits_with_two() {
    // At m = 2 the n = 0 radial functions are proportional.
    let out = gasp(&["solve-annulus", "--m", "2,0", "--alpha", "1", "--tau0", "0.5", "--tau1", "1", "--trace", "constant"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn verify_reports_each_check() {
    let out = gasp(&["verify", "--m", "0.5,0.2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 6);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");

    let out = gasp(&["verify", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL annulus family"));
}

#[test]
fn field_grid_marks_points_outside_the_domain() {
    let dir = TempDir::new().unwrap();
    let field = path(&dir, "field.csv");
    ok(&["solve-disk", "--m", "0", "--center", "5", "--radius", "3", "--trace", "constant", "--grid", "1:9:4,0:0:1", "--field", &field]);
    let rows = rows(&std::fs::read_to_string(Path::new(&field)).unwrap());
    assert!(rows[0][2].is_nan(), "x = 1 is outside the disk");
    assert!((rows[1][2] - 1.0).abs() < 1e-12);
}
