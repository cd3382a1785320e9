//! End-to-end tests of the `cosym` binary over the bundled fixtures:
//! exit codes, report formats, and the report archive directory.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn cosym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn run_passes_on_all_fixtures() {
    for name in [
        "r5_flat.json",
        "h3_r2.json",
        "t2_anosov.json",
        "cp1_s1.json",
        "cp2_s1.json",
        "example_105.json",
        "dense_reeb_cp2.json",
    ] {
        let out = cosym(&["run", fixture(name).to_str().unwrap()]);
        assert_eq!(
            exit_code(&out),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("overall: pass"), "{name}: {text}");
    }
}

#[test]
fn json_format_is_machine_readable() {
    let out = cosym(&[
        "--format",
        "json",
        "run",
        fixture("t2_anosov.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(report["overall_pass"], serde_json::Value::Bool(true));
    assert_eq!(report["label"], "t2_anosov");
    assert!(report["conventions"]["momentum_map"].is_string());
}

#[test]
fn failed_expectation_gives_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wrong.json");
    let text = std::fs::read_to_string(fixture("cp1_s1.json"))
        .unwrap()
        .replacen("[1, 1, 1, 1]", "[1, 2, 1, 1]", 1);
    std::fs::write(&path, text).unwrap();
    let out = cosym(&["run", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let rendered = String::from_utf8_lossy(&out.stdout);
    assert_eq!(rendered.matches("FAIL").count(), 1, "{rendered}");
    assert!(rendered.contains("overall: fail"));
}

#[test]
fn step_error_gives_exit_one() {
    // a type I deformation at the hypothesis boundary: η(θ) = −1
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("boundary.json");
    std::fs::write(
        &path,
        r#"{
            "schema_version": 1,
            "label": "boundary",
            "lie_algebra": {"dim": 5},
            "forms": {
                "eta": {"degree": 1, "terms": {"5": "1"}},
                "omega": {"degree": 2, "terms": {"1,2": "1", "3,4": "1"}}
            },
            "vectors": {"theta": ["0", "0", "0", "0", "-1"]},
            "scenario": [
                {"op": "deform_type_I", "eta": "eta", "omega": "omega", "theta": "theta"}
            ]
        }"#,
    )
    .unwrap();
    let out = cosym(&["run", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let rendered = String::from_utf8_lossy(&out.stdout);
    assert!(rendered.contains("ERROR"), "{rendered}");
    assert!(rendered.contains("1+η(θ)"), "{rendered}");
}

#[test]
fn invalid_input_gives_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // malformed rational
    let bad_rational = dir.path().join("bad_rational.json");
    std::fs::write(
        &bad_rational,
        r#"{"schema_version": 1, "lie_algebra": {"dim": 3},
            "forms": {"eta": {"degree": 1, "terms": {"3": "1/0"}}}}"#,
    )
    .unwrap();
    let out = cosym(&["run", bad_rational.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed rational"));
    // dangling reference
    let dangling = dir.path().join("dangling.json");
    std::fs::write(
        &dangling,
        r#"{"schema_version": 1, "lie_algebra": {"dim": 3},
            "forms": {"eta": {"degree": 1, "terms": {"3": "1"}},
                      "omega": {"degree": 2, "terms": {"1,2": "1"}}},
            "scenario": [{"op": "verify_cosymplectic", "eta": "eta", "omega": "beta2"}]}"#,
    )
    .unwrap();
    let out = cosym(&["run", dangling.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dangling reference beta2"));
    // missing file
    let out = cosym(&["run", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn check_and_deform_subcommands() {
    let out = cosym(&["check", fixture("r5_flat.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Reeb field"));
    assert!(text.contains("splitting"));

    let out = cosym(&[
        "deform",
        fixture("r5_flat.json").to_str().unwrap(),
        "--kind",
        "II",
        "--beta",
        "beta",
    ]);
    assert_eq!(exit_code(&out), 0);
    // unknown parameter name is invalid input
    let out = cosym(&[
        "deform",
        fixture("r5_flat.json").to_str().unwrap(),
        "--kind",
        "II",
        "--beta",
        "nonexistent",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dangling reference"));
}

#[test]
fn betti_fibration_moment_subcommands() {
    let out = cosym(&[
        "betti",
        fixture("cp2_s1.json").to_str().unwrap(),
        "--poincare-indices",
        "0,2,4",
    ]);
    assert_eq!(exit_code(&out), 0);

    let out = cosym(&[
        "betti",
        fixture("cp1_s1.json").to_str().unwrap(),
        "--betti",
        "1,3,3,1",
    ]);
    // T³ numbers fail the toric relations, but without an expectation the
    // step still reports and passes
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"ok\":false"));

    let out = cosym(&[
        "fibration",
        fixture("example_105.json").to_str().unwrap(),
        "--periods",
        "eta_prime",
        "--rationalize",
        "gen1,gen2",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"coefficients\":[\"-1\",\"-1\"]"), "{text}");

    let out = cosym(&[
        "--seed",
        "42",
        "moment",
        fixture("dense_reeb_cp2.json").to_str().unwrap(),
        "--point",
        "1,0;1,0;0,2",
        "--residual-a",
        "1,-1",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"1/6\",\"2/3\""), "{text}");
    assert!(text.contains("\"within_tolerance\":true"), "{text}");
}

#[test]
fn report_archive_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cosym"))
        .args(["run", fixture("cp1_s1.json").to_str().unwrap()])
        .env("COSYM_REPORT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let archived = dir.path().join("cp1_s1.report.json");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(archived).unwrap()).unwrap();
    assert_eq!(report["overall_pass"], serde_json::Value::Bool(true));
}
