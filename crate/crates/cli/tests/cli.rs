//! End-to-end binary tests: exit statuses, deterministic reports, CSV shape,
//! and spec round-tripping through the report's config echo.

use std::path::Path;
use std::process::{Command, Output};

fn qmod(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmod"))
        .args(args)
        .current_dir(dir)
        .env("QML_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn tmpdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qmod-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn strip_timestamp(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn identical_runs_differ_only_in_timestamp() {
    let dir = tmpdir("det");
    for out in ["a", "b"] {
        let r = qmod(
            &["zero-blocks", "--degree", "12", "--seed", "7", "--out", out],
            &dir,
        );
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let a = std::fs::read_to_string(dir.join("a/report.json")).unwrap();
    let b = std::fs::read_to_string(dir.join("b/report.json")).unwrap();
    assert_eq!(strip_timestamp(&a), strip_timestamp(&b));
    assert!(a.contains("\"schema\": \"qml-report/1\""));
}

#[test]
fn spec_round_trips_through_the_config_echo() {
    let dir = tmpdir("roundtrip");
    let spec = r#"{"d": 2, "components": [{"name": "plane", "assumed": "prime",
        "generators": [{"coefficients": [
            {"re": 1.0, "im": 0.0, "alpha": [1, 0]},
            {"re": -1.0, "im": 0.25, "alpha": [0, 1]}]}]}]}"#;
    std::fs::write(dir.join("spec.json"), spec).unwrap();
    let r = qmod(
        &["dims", "--spec", "spec.json", "--degree", "6", "--out", "o1"],
        &dir,
    );
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    // feed the echoed spec back in: the next report's echo must be identical
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("o1/report.json")).unwrap())
            .unwrap();
    let echoed = serde_json::to_string(&report["config"]["spec"]).unwrap();
    std::fs::write(dir.join("spec2.json"), &echoed).unwrap();
    let r2 = qmod(
        &["dims", "--spec", "spec2.json", "--degree", "6", "--out", "o2"],
        &dir,
    );
    assert!(r2.status.success());
    let report2: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("o2/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["config"]["spec"], report2["config"]["spec"]);
    assert_eq!(report["dims"], report2["dims"]);
}

#[test]
fn verification_failure_exits_one_but_still_reports() {
    let dir = tmpdir("exit1");
    // the literal binomial pairing claim fails for k >= 2 by design
    let r = qmod(&["asym-orth", "--k-max", "8", "--out", "o"], &dir);
    assert_eq!(r.status.code(), Some(1));
    let report = std::fs::read_to_string(dir.join("o/report.json")).unwrap();
    assert!(report.contains("\"pass\": false"));
}

#[test]
fn input_errors_exit_two_without_partial_files() {
    let dir = tmpdir("exit2");
    // unknown experiment name in a suite
    let r = qmod(
        &["suite", "--experiments", "dims,definitely-not-real", "--out", "o"],
        &dir,
    );
    assert_eq!(r.status.code(), Some(2));
    assert!(!dir.join("o").exists(), "no partial output on input error");

    // malformed spec
    std::fs::write(dir.join("bad.json"), "{\"d\": 3").unwrap();
    let r = qmod(&["dims", "--spec", "bad.json", "--out", "o"], &dir);
    assert_eq!(r.status.code(), Some(2));
    assert!(!dir.join("o").exists());

    // spec with wrong alpha arity reports the offending term
    std::fs::write(
        dir.join("arity.json"),
        r#"{"d": 3, "components": [{"name": "x", "assumed": "unknown",
            "generators": [{"coefficients": [{"re": 1.0, "im": 0.0, "alpha": [1, 0]}]}]}]}"#,
    )
    .unwrap();
    let r = qmod(&["dims", "--spec", "arity.json", "--out", "o"], &dir);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("generator 0 term 0"), "{err}");

    // bad subcommand goes through clap, also status 2
    let r = qmod(&["frobnicate"], &dir);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn csv_profiles_have_the_fixed_layout() {
    let dir = tmpdir("csv");
    let r = qmod(
        &["compress", "--multiplier", "z1", "--degree", "10", "--out", "o"],
        &dir,
    );
    assert!(r.status.success());
    let csv = std::fs::read_to_string(dir.join("o/profiles/compress_z1.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "degree,index,singular_value,trusted");
    let first = lines.next().unwrap();
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields.len(), 4);
    assert_eq!(fields[0], "0");
    // 17 significant digits, '.' decimal separator
    let v = fields[2];
    assert!(v.contains('.') && !v.contains(';'));
    let mantissa = v.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{v}");
    assert!(fields[3] == "true" || fields[3] == "false");
}

#[test]
fn trace_formula_passes_on_the_default_spec() {
    let dir = tmpdir("trace");
    let r = qmod(
        &["trace-formula", "--f1", "z1", "--f2", "z1", "--degree", "25", "--out", "o"],
        &dir,
    );
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("o/report.json")).unwrap())
            .unwrap();
    // multiplicity of J² in d = 3 is C(3,2) = 3; ⟨r z1, r z1⟩ = 1
    assert!((report["reports"][0]["predicted"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!(report["reports"][0]["pass"].as_bool().unwrap());
}

#[test]
fn tolerance_overrides_rejudge_and_validate_names() {
    let dir = tmpdir("tol");
    // absurdly tight tolerance flips the zero-blocks result to failure
    let r = qmod(
        &["zero-blocks", "--degree", "12", "--tol", "zero-blocks=1e-30", "--out", "o"],
        &dir,
    );
    assert_eq!(r.status.code(), Some(1));
    // overrides naming absent experiments are input errors
    let r = qmod(
        &["zero-blocks", "--degree", "12", "--tol", "dims=1e-3", "--out", "o2"],
        &dir,
    );
    assert_eq!(r.status.code(), Some(2));
    assert!(!dir.join("o2").exists());
}
