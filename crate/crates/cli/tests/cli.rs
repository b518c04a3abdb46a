use std::path::PathBuf;
use std::process::{Command, Output};

use qbm_ring_cli::CliError;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbm-ring")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qbm-ring-{}-{name}", std::process::id()))
}

#[test]
fn two_point_grid_keeps_header() {
    let o = run(&["gfun", "--points", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# qbm-ring "));
    assert_eq!(lines[1], "# command: gfun");
    assert!(lines[2].starts_with("# config: {"));
    assert_eq!(lines[3], "s,t,t_over_P,G,Gdot");
    assert_eq!(data_rows(&text).len(), 2);
}

#[test]
fn velocity_curves_decay_monotonically() {
    let o = run(&["gfun", "--s", "0.8,1.0,1.2", "--t-max-periods", "20", "--points", "41"]);
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 3 * 41);
    for s in [0.8, 1.0, 1.2] {
        let gd: Vec<f64> = rows.iter().filter(|r| r[0] == s).map(|r| r[4]).collect();
        assert_eq!(gd[0], 1.0);
        assert!(gd.windows(2).all(|w| w[1] <= w[0]), "s = {s}");
    }
}

#[test]
fn seventeen_significant_digits() {
    let text = stdout(&run(&["gfun", "--points", "3"]));
    let row = text.lines().filter(|l| !l.starts_with('#')).nth(2).unwrap();
    let g = row.split(',').nth(3).unwrap();
    let mantissa = g.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{g}");
}

#[test]
fn amplitude_oscillates_once_per_period() {
    let o = run(&["amplitude", "--t-max-periods", "6", "--points", "601", "--format", "json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["command"], "amplitude");
    let rows: Vec<Vec<f64>> = serde_json::from_value(doc["rows"].clone()).unwrap();
    assert_eq!(rows[0][3], 0.0);
    let ups: Vec<f64> = rows
        .windows(2)
        .filter(|w| w[0][3] < 0.0 && w[1][3] >= 0.0)
        .map(|w| w[0][2] + (w[1][2] - w[0][2]) * (-w[0][3]) / (w[1][3] - w[0][3]))
        .collect();
    assert!(ups.len() >= 4);
    for pair in ups.windows(2) {
        assert!((pair[1] - pair[0] - 1.0).abs() < 0.01);
    }
}

#[test]
fn isolated_expectation_is_periodic() {
    let o = run(&["wexp", "--isolated", "--state", "gaussian:0.2,0.3", "--t-max-periods", "2", "--points", "9"]);
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    for k in 0..4 {
        assert!((rows[k][3] - rows[k + 4][3]).abs() < 1e-9);
        assert!((rows[k][4] - rows[k + 4][4]).abs() < 1e-9);
    }
}

#[test]
fn early_and_general_wexp_run() {
    for flag in ["--early", "--general"] {
        let mut args = vec!["wexp", "--state", "gaussian:0,0.5", "--t-max-periods", "1", "--points", "3"];
        if flag == "--early" {
            args.push(flag);
        }
        let o = run(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let rows = data_rows(&stdout(&o));
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r[5] <= 1.0));
    }
}

#[test]
fn params_report() {
    let path = temp_path("params.json");
    std::fs::write(
        &path,
        r#"{
            "bath": {"s": [1.0, 1.2], "g": 1.0, "omega_cutoff": 1e5},
            "ring": {"radius": 0.5e-6, "v_f": 1e5, "c0": 100, "n0": 1, "n1": 0.1, "k_f": 1e9},
            "circuit": {"r_coil": 1e-3, "rho_modes": 1e10, "inductance": 1e-6}
        }"#,
    )
    .unwrap();
    let o = run(&["params", "--config", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    let r = &results[0];
    assert!((r["mu"]["value"].as_f64().unwrap() - 5e-6).abs() < 1e-18);
    assert!(r["gamma"]["value"].as_f64().unwrap() < 1.0);
    let bound = r["radius_upper_bound"]["value"].as_f64().unwrap();
    assert!(bound > 1e-4 && bound < 1e-2);
    assert!(r["tau_q"]["value"].as_f64().unwrap() > 0.0);
    assert_eq!(r["warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn params_reports_missing_timescales() {
    let o = run(&["params", "--g", "1e-30"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &doc["results"][0];
    assert!(r["tau_decoh"]["value"].is_null());
    assert!(r["tau_decoh"]["reason"].as_str().unwrap().contains("decoherence"));
}

#[test]
fn output_file() {
    let path = temp_path("gfun.csv");
    let o = run(&["gfun", "--points", "4", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(data_rows(&text).len(), 4);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["gfun", "--state", "excited"]).status.code(), Some(1));
    assert_eq!(run(&["gfun", "--points", "1"]).status.code(), Some(1));
    assert_eq!(run(&["gfun", "--s", "2.5"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["gfun", "--config", "/nonexistent/qbm.json"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn exit_code_mapping() {
    assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
    assert_eq!(CliError::from(qbm_ring::Error::Degenerate("x".into())).exit_code(), 2);
    assert_eq!(CliError::OracleFailure("x".into()).exit_code(), 3);
}

#[test]
fn oracle_quick_passes_and_detects_mismatch() {
    let o = run(&["oracle", "--quick"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 4);

    let o = run(&["oracle", "--quick", "--inject-mismatch", "1.05"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.contains("[FAIL] kernel_direct_vs_quadrature"), "{text}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle check failed"));
}
