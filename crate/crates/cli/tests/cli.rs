use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn naqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_naqc"))
        .args(args)
        .env_remove("NAQC_CONFIG")
        .output()
        .expect("binary runs")
}

fn naqc_with_config(args: &[&str], config: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_naqc"))
        .args(args)
        .env("NAQC_CONFIG", config)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

const PRODUCT: &str = r#"{"dims": [2, 2], "matrix": [
  [[0.5, 0], [0.5, 0], [0, 0], [0, 0]],
  [[0.5, 0], [0.5, 0], [0, 0], [0, 0]],
  [[0, 0], [0, 0], [0, 0], [0, 0]],
  [[0, 0], [0, 0], [0, 0], [0, 0]]
]}"#;

#[test]
fn compute_werner_optimized() {
    let v = json(&naqc(&["compute", "--werner", "1", "--measure", "l1", "--optimize"]));
    assert!((v["s_value"].as_f64().unwrap() - 6.0).abs() < 1e-9);
    assert!(v["angles"]["theta"].is_f64());
    assert_eq!(v["bounds"]["lhs"], 4.0);
    let v = json(&naqc(&["compute", "--werner", "0.5", "--measure", "l1", "--optimize"]));
    assert!((v["s_value"].as_f64().unwrap() - 1.5).abs() < 1e-9);
}

#[test]
fn compute_product_state_file() {
    let f = temp_file(PRODUCT);
    let out = naqc(&["compute", "--state", f.path().to_str().unwrap(), "--measure", "l1"]);
    assert!(stderr(&out).is_empty());
    let v = json(&out);
    assert!((v["s_value"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert!((v["patterns"]["full"].as_f64().unwrap() - 18.0).abs() < 1e-9);
    let v = json(&naqc(&["compute", "--state", f.path().to_str().unwrap(), "--measure", "relent"]));
    assert!((v["s_value"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn compute_pattern_selection() {
    let v = json(&naqc(&["compute", "--werner", "1", "--pattern", "full"]));
    assert!((v["s_value"].as_f64().unwrap() - 12.0).abs() < 1e-9);
    let out = naqc(&["compute", "--werner", "1", "--pattern", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compute_rejects_bad_input() {
    let malformed = temp_file("{\"dims\": [2, 2],\n \"matrix\": [[[1, 0]]");
    let out = naqc(&["compute", "--state", malformed.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let bad_trace = PRODUCT.replacen("[[0.5, 0], [0.5, 0], [0, 0], [0, 0]]", "[[0.7, 0], [0.5, 0], [0, 0], [0, 0]]", 1);
    let f = temp_file(&bad_trace);
    let out = naqc(&["compute", "--state", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("validation failed"), "{}", stderr(&out));

    let f = temp_file(PRODUCT);
    let out = naqc(&["compute", "--state", f.path().to_str().unwrap(), "--werner", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(naqc(&["compute"]).status.code(), Some(2));
    assert_eq!(naqc(&["compute", "--werner", "1.5"]).status.code(), Some(2));
    assert_eq!(naqc(&["compute", "--state", "/nonexistent/file.json"]).status.code(), Some(2));
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn scan_l1_eleven_steps() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = naqc(&["scan", "--measure", "l1", "--steps", "11", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().next().unwrap(), "p_w,s_opt,theta,phi,s_full_pattern,bound_lhs,bound_sqi");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 11);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 1.0);
    assert!((last[1] - 6.0).abs() < 1e-5);
    assert_eq!(last[5], 4.0);
    assert_eq!(last[6], 6.0);
    assert!(text.lines().last().unwrap().starts_with("1.000000,6.000000,"));
}

#[test]
fn scan_relent_below_lhs_at_point_nine() {
    let out = naqc(&["scan", "--measure", "relent", "--steps", "11"]);
    let rows = csv_rows(&stdout(&out));
    let row = rows.iter().find(|r| (r[0] - 0.9).abs() < 1e-9).unwrap();
    assert!(row[1] < 4.0);
}

#[test]
fn scan_two_steps_and_patterns() {
    let out = naqc(&["scan", "--measure", "l1", "--steps", "2", "--patterns"]);
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "p_w,s_opt,theta,phi,s_full_pattern,bound_lhs,bound_sqi,s_ijk_over_2,s_full_over_9"
    );
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][0], rows[0][1]), (0.0, 0.0));
    assert_eq!((rows[1][0], rows[1][1]), (1.0, 6.0));
    assert_eq!(rows[1][7], 3.0);
    assert!((rows[1][8] - rows[1][4] / 9.0).abs() < 1e-6);
}

#[test]
fn scan_is_byte_stable() {
    let a = naqc(&["scan", "--measure", "relent", "--steps", "5", "--patterns"]);
    let b = naqc(&["scan", "--measure", "relent", "--steps", "5", "--patterns"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_errors() {
    assert_eq!(naqc(&["scan", "--steps", "1"]).status.code(), Some(2));
    let out = naqc(&["scan", "--steps", "3", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn thresholds() {
    let v = json(&naqc(&["threshold", "--measure", "l1", "--bound", "lhs"]));
    assert!((v["p_star"].as_f64().unwrap() - 0.8165).abs() <= 1e-4);
    let v = json(&naqc(&["threshold", "--measure", "relent", "--bound", "lhs"]));
    assert!((v["p_star"].as_f64().unwrap() - 0.944).abs() <= 1e-3);
    let v = json(&naqc(&["threshold", "--measure", "l1", "--bound", "sqi"]));
    assert_eq!(v["p_star"], "none");
}

#[test]
fn verify_suites() {
    let v = json(&naqc(&["verify", "--suite", "lhs", "--trials", "10000", "--seed", "7"]));
    assert_eq!(v["pass"], true);
    assert!(v["checks"][0]["max_observed"].as_f64().unwrap() <= 4.0 + 1e-9);

    let v = json(&naqc(&["verify", "--suite", "quantum", "--trials", "100000", "--seed", "7"]));
    assert_eq!(v["pass"], true);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["max_observed"].as_f64().unwrap() <= 6.0 + 1e-6);
    }

    let v = json(&naqc(&["verify", "--suite", "mub"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 8);

    for suite in ["coherence", "sqi", "qudit", "f"] {
        let v = json(&naqc(&["verify", "--suite", suite, "--trials", "500", "--seed", "3"]));
        assert_eq!(v["pass"], true, "{suite}");
        assert_eq!(v["seed"], 3);
    }
    assert_eq!(naqc(&["verify", "--suite", "lhs", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(naqc(&["verify", "--suite", "bogus"]).status.code(), Some(2));
}

#[test]
fn mub_dumps() {
    let v = json(&naqc(&["mub", "--dim", "2", "--theta", "0", "--phi", "0"]));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let expected = serde_json::json!([
        [[[h, 0.0], [h, 0.0]], [[h, 0.0], [-h, 0.0]]],
        [[[h, 0.0], [0.0, h]], [[h, 0.0], [0.0, -h]]],
        [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
    ]);
    let got = &v["bases"];
    for (b, eb) in got.as_array().unwrap().iter().zip(expected.as_array().unwrap()) {
        for (vec, ev) in b.as_array().unwrap().iter().zip(eb.as_array().unwrap()) {
            for (z, ez) in vec.as_array().unwrap().iter().zip(ev.as_array().unwrap()) {
                for part in 0..2 {
                    assert!((z[part].as_f64().unwrap() - ez[part].as_f64().unwrap()).abs() < 1e-14);
                }
            }
        }
    }
    let v = json(&naqc(&["mub", "--dim", "3"]));
    assert_eq!(v["dim"], 3);
    assert_eq!(v["bases"].as_array().unwrap().len(), 4);

    let out = naqc(&["mub", "--dim", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("[2, 3, 4, 5, 7, 8, 9, 25]"), "{}", stderr(&out));
    assert_eq!(naqc(&["mub", "--dim", "3", "--theta", "1"]).status.code(), Some(2));
}

#[test]
fn config_file_is_honoured() {
    let cfg = temp_file(r#"{"grid_theta": 8, "grid_phi": 4, "seed": 11, "trials": 50}"#);
    let v = json(&naqc_with_config(&["verify", "--suite", "lhs"], cfg.path()));
    assert_eq!(v["seed"], 11);
    assert_eq!(v["trials"], 50);
    // flags take precedence
    let v = json(&naqc_with_config(&["verify", "--suite", "lhs", "--seed", "2"], cfg.path()));
    assert_eq!(v["seed"], 2);
    let v = json(&naqc_with_config(&["compute", "--werner", "1", "--optimize"], cfg.path()));
    assert!((v["s_value"].as_f64().unwrap() - 6.0).abs() < 1e-9);

    let bad = temp_file(r#"{"grid_theta": "many"}"#);
    assert_eq!(naqc_with_config(&["mub"], bad.path()).status.code(), Some(2));
    let zero = temp_file(r#"{"grid_theta": 1}"#);
    assert_eq!(naqc_with_config(&["mub"], zero.path()).status.code(), Some(2));
}
