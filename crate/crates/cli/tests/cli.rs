use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphon-psi"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn csv_values(text: &str) -> Vec<f64> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn triangle_csv() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", "3 3\n0 1\n1 2\n0 2\n");
    for route in ["eigen", "newton", "harary-sachs"] {
        let text = stdout(&["graph", "--input", &tri, "-K", "3", "--route", route]);
        assert!(text.starts_with("k,coeff\n"));
        let c = csv_values(&text);
        let want = [1.0, 0.0, -1.0 / 3.0, -2.0 / 27.0];
        assert_eq!(c.len(), 4);
        for (g, w) in c.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{route}: {c:?}");
        }
    }
}

#[test]
fn graph_json_reports_spectrum_and_energy() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", "# K3\n3 3\n0 1\n1 2\n0 2\n");
    let v: Value = serde_json::from_str(&stdout(&["graph", "--input", &tri, "-K", "3", "--format", "json"])).unwrap();
    assert_eq!(v["route"], "eigen");
    assert_eq!(v["K"], 3);
    assert!((v["energy"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!((v["spectrum_top"][0].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!(v["roots"].is_array());
}

#[test]
fn single_vertex_is_constant_one() {
    let dir = TempDir::new().unwrap();
    let one = write(&dir, "one.txt", "1 0\n");
    assert_eq!(csv_values(&stdout(&["graph", "--input", &one, "-K", "4"])), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let looped = write(&dir, "loop.txt", "2 1\n0 0\n");
    let bad_weights = write(&dir, "w.json", r#"{"type":"step","weights":[0.5,0.4],"values":[[0,1],[1,0]]}"#);
    let half = write(&dir, "c.json", r#"{"type":"constant","p":0.5}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec!["graph", "--input", &looped],
        vec!["graph", "--input", "/nonexistent/graph.txt"],
        vec!["kernel", "--input", &bad_weights],
        vec!["converge", "--input", &half, "--seed", "1"],
        vec!["converge", "--input", &half, "--n", "50"],
        vec!["converge", "--input", &half, "--n", "50,40", "--seed", "1"],
        vec!["signs", "--p", "3/2"],
        vec!["signs", "--p", "abc"],
        vec!["graph", "--input", &looped, "-K", "1"],
        vec!["quasirandom", "--p", "1/2", "--model", "er", "--n", "10,20"],
        vec!["quasirandom", "--p", "1/2"],
        vec!["nonsense"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn constant_kernel_matches_closed_form() {
    let dir = TempDir::new().unwrap();
    let half = write(&dir, "c.json", r#"{"type":"constant","p":0.5}"#);
    let c = csv_values(&stdout(&["kernel", "--input", &half, "-K", "6"]));
    let want = [1.0, 0.0, -1.0 / 4.0, -1.0 / 24.0, 1.0 / 64.0, 1.0 / 240.0, -1.0 / 2304.0];
    for (g, w) in c.iter().zip(want) {
        assert!((g - w).abs() < 1e-15, "{c:?}");
    }
}

/// The top operator eigenvalue of the half graphon is 2/π (not 1/π); a
/// coarse grid already lands within 1e-2.
#[test]
fn half_kernel_top_eigenvalue() {
    let dir = TempDir::new().unwrap();
    let half = write(&dir, "h.json", r#"{"type":"half"}"#);
    let text = stdout(&["kernel", "--input", &half, "--blocks", "256", "--format", "json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let top = v["spectrum_top"][0].as_f64().unwrap();
    assert!((top - 2.0 / std::f64::consts::PI).abs() < 1e-2, "{top}");
    assert_eq!(v["blocks"], 256);
}

#[test]
fn signs_report_flags_quoted_pattern() {
    let text = stdout(&["signs", "--p", "1/2", "-K", "6"]);
    assert!(text.contains("# signs: +,0,-,-,+,+,-\n"), "{text}");
    assert!(text.contains("first at k = 3"));
    assert!(text.contains("\n6,-1/2304,-\n"));

    let v: Value = serde_json::from_str(&stdout(&["signs", "--p", "0.5", "-K", "6", "--format", "json"])).unwrap();
    assert_eq!(v["signs"], "+,0,-,-,+,+,-");
    assert_eq!(v["quoted_mismatch_at"], 3);
    assert_eq!(v["coeffs"][5], "1/240");
    assert_eq!(v["turan"][0]["value"], "1/4");

    let v: Value = serde_json::from_str(&stdout(&["signs", "--p", "0", "-K", "4", "--format", "json"])).unwrap();
    assert_eq!(v["signs"], "+,0,0,0,0");
    assert_eq!(v["exact_zeros"], serde_json::json!([2, 3, 4]));
    assert!(v["note"].is_null());
}

#[test]
fn partitions_dump() {
    let text = stdout(&["partitions", "-K", "6"]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, ["6,1,0,1,6,6,-1", "4+2,2,1,1,5,8,1", "3+3,2,0,2,6,18,1", "2+2+2,3,3,0,3,48,-1"]);
}

#[test]
fn quasirandom_verdicts() {
    let text = stdout(&["quasirandom", "--p", "1", "--model", "complete", "--n", "20,40,80"]);
    assert!(text.contains("# verdict: PASS"), "{text}");

    let dir = TempDir::new().unwrap();
    let half = write(&dir, "h.json", r#"{"type":"half"}"#);
    let args = [
        "quasirandom", "--p", "1/2", "--model", "kernel", "--kernel", &half, "--sample-mode", "grid", "--n", "60,120",
        "--seed", "5", "--format", "json",
    ];
    let v: Value = serde_json::from_str(&stdout(&args)).unwrap();
    assert_eq!(v["verdict"], "FAIL");
    assert_eq!(v["pass"], false);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

fn converge_to(out: &Path, threads: &str, extra: &[&str], kernel: &str) {
    let status = bin()
        .env("RAYON_NUM_THREADS", threads)
        .args(["converge", "--input", kernel, "--n", "20,40,60", "--seed", "3,4", "--samples", "3", "-K", "8"])
        .args(extra)
        .args(["--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn converge_is_byte_identical_across_runs_and_threads() {
    let dir = TempDir::new().unwrap();
    let kernel = write(&dir, "k.json", r#"{"type":"step","weights":[0.25,0.75],"values":[[0.9,0.1],[0.1,0.4]]}"#);
    for extra in [&[][..], &["--format", "json"][..]] {
        let a = dir.path().join("a.out");
        let b = dir.path().join("b.out");
        converge_to(&a, "1", extra, &kernel);
        converge_to(&b, "4", extra, &kernel);
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
    let text = fs::read_to_string(dir.path().join("a.out")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3 * 3 * 9);
    assert_eq!(v["summary"].as_array().unwrap().len(), 3);
}

#[test]
fn converge_rows_per_size_and_sample() {
    let dir = TempDir::new().unwrap();
    let half = write(&dir, "c.json", r#"{"type":"constant","p":0.5}"#);
    let text = stdout(&["converge", "--input", &half, "--n", "30,60,90", "--seed", "1,2,3", "-K", "16"]);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,sample,seed,k,coeff,target,deviation,lambda1,lambda2");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 3 * 17);
    assert_eq!(rows[0][..4], ["30", "0", rows[0][2], "0"]);
    assert_eq!(rows.last().unwrap()[..2], ["90", "2"]);
}
