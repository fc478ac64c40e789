//! Behavior of the `uwsec` binary: output formats, exit codes, stdin
//! scenarios and determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_uwsec"))
}

fn scenario_path(name: &str) -> String {
    format!("{}/../../scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn uwsec");
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn eval_produces_all_six_metrics() {
    let out = run_ok(&["eval", "--scenario", &scenario_path("fig2.json")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let m = &v["metrics"];
    for key in [
        "sop_lower",
        "sop_asym_main",
        "sop_asym_eve",
        "pnz",
        "pnz_asym_main",
        "pnz_asym_eve",
    ] {
        let x = m[key].as_f64().unwrap_or(f64::NAN);
        assert!(x.is_finite() && (0.0..=1.0).contains(&x), "{key} = {x}");
    }
    assert!(v["fixed_gain_constant"].as_f64().unwrap() > 0.0);
    assert!(v["diagnostics"]["nodes"].as_u64().unwrap() > 0);
}

#[test]
fn eval_at_zero_rate_satisfies_complementarity() {
    // Θ = 1 record: SOP_L + PNZ = 1.
    let json = std::fs::read_to_string(scenario_path("fig2.json")).unwrap();
    let json = json.replace("\"rate_rs\": 0.01", "\"rate_rs\": 0.0");
    let mut child = bin()
        .args(["eval", "--scenario", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(json.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let sop = v["metrics"]["sop_lower"].as_f64().unwrap();
    let pnz = v["metrics"]["pnz"].as_f64().unwrap();
    assert!((sop + pnz - 1.0).abs() < 1e-6, "sop {sop} pnz {pnz}");
}

#[test]
fn unknown_preset_label_gives_config_exit_code() {
    let json = std::fs::read_to_string(scenario_path("fig2.json")).unwrap();
    let json = json.replace("[2.4,0.05]", "[unknown-water]");
    let mut child = bin()
        .args(["eval", "--scenario", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(json.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("[unknown-water]"), "stderr: {err}");
}

#[test]
fn malformed_scenario_reports_location_and_exit_one() {
    let mut child = bin()
        .args(["eval", "--scenario", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"{\n  \"rf_main\": {\"alpha\": }\n}")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn bad_arguments_exit_one() {
    let out = bin().args(["eval"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_csv_is_versioned_ordered_and_deterministic() {
    // A small 3-point sweep with Monte Carlo columns.
    let json = r#"{
        "rf_main": {"alpha": 1.6, "mu": 1.5, "mean_snr_db": 15.0},
        "rf_eve":  {"alpha": 1.6, "mu": 1.5, "mean_snr_db": 10.0},
        "uwoc":    {"preset": "[2.4,0.05]", "mean_snr_db": 10.0},
        "relay":   {"mode": "explicit_c", "c": 30.0},
        "secrecy": {"rate_rs": 0.01},
        "sweep":   {"variable": "gamma1_db", "start_db": 10.0, "stop_db": 20.0, "points": 3},
        "mc":      {"trials": 20000, "master_seed": 77, "stream_count": 8}
    }"#;
    let run = || {
        let mut child = bin()
            .args(["sweep", "--scenario", "-"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.as_mut().unwrap().write_all(json.as_bytes()).unwrap();
        let out = child.wait_with_output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a, b, "sweep output must be deterministic");
    let mut lines = a.lines();
    assert_eq!(lines.next().unwrap(), "# uwsec-sweep-csv v1");
    assert!(a.contains("# axis: gamma1_db"));
    assert!(a.contains("mc_sop_lower"));
    let data: Vec<&str> = a.lines().filter(|l| !l.starts_with('#') && !l.starts_with("axis")).collect();
    assert_eq!(data.len(), 3);
    let first: f64 = data[0].split(',').next().unwrap().parse().unwrap();
    let last: f64 = data[2].split(',').next().unwrap().parse().unwrap();
    assert_eq!(first, 10.0);
    assert_eq!(last, 20.0);
}

#[test]
fn mc_subcommand_reports_estimates_with_errors() {
    let out = run_ok(&[
        "mc",
        "--scenario",
        &scenario_path("fig2.json"),
        "--trials",
        "20000",
        "--seed",
        "5",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["trials"].as_u64(), Some(20_000));
    assert_eq!(v["master_seed"].as_u64(), Some(5));
    for key in ["sop_lower", "sop_exact", "pnz"] {
        assert!(v[key]["value"].as_f64().unwrap().is_finite());
        assert!(v[key]["std_error"].as_f64().unwrap() > 0.0);
    }
    // Pathwise containment via common random numbers.
    assert!(v["sop_lower"]["value"].as_f64() <= v["sop_exact"]["value"].as_f64());
}

#[test]
fn optimize_infeasible_target_exits_three() {
    let out = bin()
        .args([
            "optimize",
            "--scenario",
            &scenario_path("fig2.json"),
            "--metric",
            "sop",
            "--target",
            "0.000001",
            "--lo-db",
            "0",
            "--hi-db",
            "40",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn optimize_feasible_target_reports_power() {
    let out = run_ok(&[
        "optimize",
        "--scenario",
        &scenario_path("fig2.json"),
        "--metric",
        "sop",
        "--target",
        "0.9",
        "--lo-db",
        "0",
        "--hi-db",
        "40",
        "--tol-db",
        "0.1",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let g = v["gamma1_db"].as_f64().unwrap();
    assert!((0.0..=40.0).contains(&g));
    assert!(v["saturation"]["floor"].as_f64().unwrap() > 0.0);
}

#[test]
fn selftest_passes_and_prints_named_checks() {
    let out = run_ok(&["selftest"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS] fox-h-exp-reduction"));
    assert!(text.contains("selftest passed"));
}
