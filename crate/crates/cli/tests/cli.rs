use std::process::{Command, Output};

fn giant_atoms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_giant-atoms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = giant_atoms(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn braided_transfer_completes_at_quarter_period() {
    let csv = stdout(&["evolve", "--config", "braided", "--phi", "0.5pi", "--t-max", "3.1416", "--steps", "100"]);
    assert!(csv.starts_with("t,C_ac,C_bd,C_ab,C_cd,C_ad,C_bc,N\n"));
    let rows = rows(&csv);
    assert_eq!(rows.len(), 101);
    let near = rows
        .iter()
        .min_by(|a, b| (a[0] - std::f64::consts::FRAC_PI_2).abs().total_cmp(&(b[0] - std::f64::consts::FRAC_PI_2).abs()))
        .unwrap();
    assert!((near[2] - 1.0).abs() < 1e-6, "C_bd = {}", near[2]);
}

#[test]
fn separated_at_pi_stays_decoupled() {
    for method in ["amplitude", "lindblad"] {
        let csv = stdout(&["evolve", "--config", "separated", "--phi", "1pi", "--t-max", "5", "--steps", "50", "--method", method]);
        for row in rows(&csv) {
            assert!((row[1] - 1.0).abs() < 1e-9, "{method}: {row:?}");
        }
    }
}

#[test]
fn small_in_phase_reaches_quarter() {
    let csv = stdout(&["evolve", "--config", "small", "--phi", "0", "--t-max", "20", "--steps", "200"]);
    let last = rows(&csv).pop().unwrap();
    assert_eq!(last[0], 20.0);
    for c in &last[1..4] {
        assert!((c - 0.25).abs() < 1e-3);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("grid{i}.csv"))).collect();
    for p in &paths {
        stdout(&[
            "sweep", "--config", "nested", "--pair", "bd", "--phi-steps", "37", "--t-steps", "41",
            "--out", p.to_str().unwrap(),
        ]);
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    assert_eq!(a.iter().filter(|&&b| b == b'\n').count(), 1 + 37 * 41);
    assert!(!a.contains(&b'\r'));
}

#[test]
fn coeffs_json_mirrors_coefficient_set() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&["coeffs", "--config", "separated", "--phi", "0"])).unwrap();
    for key in ["lamb_shift", "g_ab", "g_cd", "gamma_individual", "gamma_ab", "gamma_cd", "gamma", "phi"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["gamma_individual"]["a"], 4.0);
    assert_eq!(json["gamma_ab"], 4.0);
}

#[test]
fn custom_layout_file_matches_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("braided.json");
    std::fs::write(&path, r#"{"a":[0,2],"b":[1,3],"c":[0,2],"d":[1,3]}"#).unwrap();
    let custom = stdout(&["evolve", "--config", "custom", "--layout", path.to_str().unwrap(), "--phi", "0.3", "--steps", "20"]);
    let preset = stdout(&["evolve", "--config", "braided", "--phi", "0.3", "--steps", "20"]);
    assert_eq!(custom, preset);
}

#[test]
fn peaks_reports_nested_sub_peak() {
    let csv = stdout(&["peaks", "--config", "nested", "--phi", "0.333333333333333333pi", "--pair", "ab"]);
    let line = csv.lines().nth(1).unwrap();
    let value: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
    assert!((value - 0.39).abs() < 0.01);
}

#[test]
fn verify_json_lists_checks() {
    let out = giant_atoms(&["verify", "--json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 20);
    let failed = checks.iter().filter(|c| c["pass"] == false).count();
    assert_eq!(report["failed"], failed);
    // Exit status mirrors the report.
    assert_eq!(out.status.code(), Some(if failed == 0 { 0 } else { 1 }));
}

#[test]
fn invalid_flags_fail_with_message() {
    let cases: &[&[&str]] = &[
        &["evolve", "--phi", "half"],
        &["evolve", "--phi", "0", "--config", "triangle"],
        &["evolve", "--phi", "0", "--config", "custom"],
        &["evolve", "--phi", "0", "--layout", "x.json"],
        &["evolve", "--phi", "0", "--gamma", "-1"],
        &["evolve", "--phi", "0", "--t-max", "0"],
        &["evolve", "--phi", "0", "--initial-sign", "*"],
        &["sweep", "--pair", "ax"],
        &["sweep", "--t-steps", "1"],
        &["peaks", "--phi", "1", "--pair", "bd", "--t-horizon", "-3"],
        &["peaks", "--phi", "1", "--pair", "bd", "--method", "lindblad"],
        &["coeffs", "--phi", "0", "--config", "custom", "--layout", "/nonexistent/layout.json"],
    ];
    for args in cases {
        let out = giant_atoms(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty(), "{args:?} printed no message");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn malformed_layout_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    for body in [r#"{"a":[0],"b":[1],"c":[0]}"#, r#"{"a":[],"b":[1],"c":[0],"d":[1]}"#, "not json"] {
        std::fs::write(&path, body).unwrap();
        let out = giant_atoms(&["coeffs", "--config", "custom", "--layout", path.to_str().unwrap(), "--phi", "0"]);
        assert!(!out.status.success(), "{body}");
    }
}
