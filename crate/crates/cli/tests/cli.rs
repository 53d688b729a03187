//! Black-box tests of the `unigeo` binary: exit codes, printed formats,
//! JSON I/O round trips and seeding behavior.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn unigeo() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_unigeo"));
    // Tests control seeding explicitly; never inherit one from the
    // environment.
    cmd.env_remove("UNIGEO_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    let mut cmd = unigeo();
    cmd.args(args);
    cmd.output().expect("binary runs")
}

fn stdout_lines(output: &Output) -> Vec<String> {
    String::from_utf8(output.stdout.clone())
        .expect("stdout is UTF-8")
        .lines()
        .map(str::to_string)
        .collect()
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

/// Writes a diagonal unitary with the given phases as matrix JSON.
fn write_diagonal_unitary(dir: &Path, name: &str, phases: &[f64]) -> PathBuf {
    let n = phases.len();
    let entry = |i: usize, j: usize, f: fn(f64) -> f64| if i == j { f(phases[i]) } else { 0.0 };
    let re: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| entry(i, j, f64::cos)).collect())
        .collect();
    let im: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| entry(i, j, f64::sin)).collect())
        .collect();
    write_json(dir, name, &json!({ "re": re, "im": im }))
}

fn write_json(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

/// Rank-one projection of the plane onto the line at `angle` from e1.
fn write_line_projection(dir: &Path, name: &str, angle: f64) -> PathBuf {
    let (c, s) = (angle.cos(), angle.sin());
    write_json(
        dir,
        name,
        &json!({
            "re": [[c * c, c * s], [c * s, s * s]],
            "im": [[0.0, 0.0], [0.0, 0.0]],
        }),
    )
}

fn parse_f64(line: &str) -> f64 {
    line.trim().parse().expect("numeric output")
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"][..], &["dist", "--help"][..]] {
        let out = run(args);
        assert_eq!(code(&out), 0, "{args:?} should exit 0");
    }
    let out = run(&["--help"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("unigeo"));
}

#[test]
fn usage_and_input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad_json = write_json(dir.path(), "bad.json", &json!({}));
    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{ not json").unwrap();

    let cases: Vec<Vec<&str>> = vec![
        vec![],                                           // no subcommand
        vec!["frobnicate"],                               // unknown subcommand
        vec!["dist", "--unknown-flag"],                   // unknown flag
        vec!["dist", "/nonexistent/u.json", "/nonexistent/v.json"], // missing files
        vec![
            "dist",
            garbled.to_str().unwrap(),
            garbled.to_str().unwrap(),
        ], // unparseable JSON
        vec![
            "dist",
            bad_json.to_str().unwrap(),
            bad_json.to_str().unwrap(),
        ], // wrong schema
        vec!["verify", "--suite", "frobnicate"],          // unknown suite
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(code(&out), 1, "{args:?} should exit 1");
        // Parse and validation failures carry an `error:` line; a bare
        // missing subcommand gets the usage text instead.
        assert!(
            !stderr_text(&out).is_empty(),
            "{args:?} should print a diagnostic"
        );
    }
}

#[test]
fn dist_of_identical_unitaries_is_zero() {
    let dir = TempDir::new().unwrap();
    let u = write_diagonal_unitary(dir.path(), "u.json", &[0.0, 0.0]);
    let out = run(&["dist", u.to_str().unwrap(), u.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_lines(&out), ["0", "0"]);
}

#[test]
fn dist_diagonal_pair_in_trace_norm() {
    let dir = TempDir::new().unwrap();
    let u = write_diagonal_unitary(dir.path(), "u.json", &[0.0, 0.0]);
    let v = write_diagonal_unitary(dir.path(), "v.json", &[PI / 2.0, PI / 4.0]);
    let out = run(&[
        "dist",
        u.to_str().unwrap(),
        v.to_str().unwrap(),
        "--norm",
        "schatten:1",
    ]);
    assert_eq!(code(&out), 0);
    let lines = stdout_lines(&out);
    // 3 pi / 4 and pi / 2, printed as shortest round-trip decimals.
    assert_eq!(lines[0], "2.356194490192345");
    assert_eq!(lines[1], "1.5707963267948966");
    assert!(stderr_text(&out).is_empty());
}

#[test]
fn dist_warns_when_endpoints_are_antipodal() {
    let dir = TempDir::new().unwrap();
    let u = write_diagonal_unitary(dir.path(), "u.json", &[0.0, 0.0]);
    let v = write_diagonal_unitary(dir.path(), "v.json", &[PI, PI]);
    let out = run(&[
        "dist",
        u.to_str().unwrap(),
        v.to_str().unwrap(),
        "--norm",
        "schatten:1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_lines(&out)[0], "6.283185307179586"); // 2 pi
    assert!(stderr_text(&out).contains("not unique"));
}

#[test]
fn geodesic_feeds_action_matching_squared_distance() {
    let dir = TempDir::new().unwrap();
    let u = write_diagonal_unitary(dir.path(), "u.json", &[0.0, 0.0]);
    let v = write_diagonal_unitary(dir.path(), "v.json", &[PI / 2.0, PI / 4.0]);
    let path = dir.path().join("path.json");

    let out = run(&[
        "geodesic",
        u.to_str().unwrap(),
        v.to_str().unwrap(),
        "--b",
        "2",
        "--samples",
        "7",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let body: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(body["n"], 2);
    assert_eq!(body["b"], 2.0);
    assert_eq!(body["breakpoints"].as_array().unwrap().len(), 8);
    assert_eq!(body["exponents"].as_array().unwrap().len(), 7);

    let action_out = run(&["action", path.to_str().unwrap(), "--lagrangian", "energy"]);
    assert_eq!(code(&action_out), 0);
    let action = parse_f64(&stdout_lines(&action_out)[0]);

    let dist_out = run(&[
        "dist",
        u.to_str().unwrap(),
        v.to_str().unwrap(),
        "--norm",
        "schatten:2",
    ]);
    let d = parse_f64(&stdout_lines(&dist_out)[0]);
    assert!(
        (action - d * d / 2.0).abs() <= 1e-9,
        "energy action {action} should equal d^2/b = {}",
        d * d / 2.0
    );
}

#[test]
fn geodesic_rejects_zero_samples() {
    let dir = TempDir::new().unwrap();
    let u = write_diagonal_unitary(dir.path(), "u.json", &[0.0, 0.0]);
    let out = run(&[
        "geodesic",
        u.to_str().unwrap(),
        u.to_str().unwrap(),
        "--samples",
        "0",
        "-o",
        dir.path().join("p.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn angles_planar_pair_radians_degrees_and_basis_input() {
    let dir = TempDir::new().unwrap();
    let p = write_line_projection(dir.path(), "p.json", 0.0);
    // The second subspace arrives as an orthonormal spanning column to
    // exercise the basis input form.
    let angle = PI / 6.0;
    let q = write_json(
        dir.path(),
        "q.json",
        &json!({
            "basis": {
                "re": [[angle.cos()], [angle.sin()]],
                "im": [[0.0], [0.0]],
            }
        }),
    );

    let out = run(&[
        "angles",
        p.to_str().unwrap(),
        q.to_str().unwrap(),
        "--norm",
        "schatten:1",
        "--norm",
        "kyfan:1",
    ]);
    assert_eq!(code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 3);
    assert!((parse_f64(&lines[0]) - angle).abs() <= 1e-12);
    for (line, spec) in lines[1..].iter().zip(["schatten:1", "kyfan:1"]) {
        let (label, value) = line.split_once(' ').expect("spec and value");
        assert_eq!(label, spec);
        assert!((parse_f64(value) - angle).abs() <= 1e-12);
    }

    let deg = run(&[
        "angles",
        p.to_str().unwrap(),
        q.to_str().unwrap(),
        "--degrees",
    ]);
    assert_eq!(code(&deg), 0);
    assert!((parse_f64(&stdout_lines(&deg)[0]) - 30.0).abs() <= 1e-9);
}

#[test]
fn rotation_exponent_has_plus_minus_theta_spectrum() {
    let dir = TempDir::new().unwrap();
    let angle = PI / 6.0;
    let p = write_line_projection(dir.path(), "p.json", 0.0);
    let q = write_line_projection(dir.path(), "q.json", angle);
    let file = dir.path().join("x.json");

    let to_file = run(&[
        "rotation",
        p.to_str().unwrap(),
        q.to_str().unwrap(),
        "-o",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&to_file), 0);
    let to_stdout = run(&["rotation", p.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(code(&to_stdout), 0);
    assert_eq!(
        std::fs::read(&file).unwrap(),
        to_stdout.stdout,
        "file and stdout forms should match byte for byte"
    );

    let exponent = serde_json::from_str::<unigeo_core::json::MatrixJson>(
        &std::fs::read_to_string(&file).unwrap(),
    )
    .unwrap()
    .to_hermitian()
    .unwrap();
    let eigenvalues = exponent.eigenvalues().unwrap();
    assert!((eigenvalues[0] - angle).abs() <= 1e-12);
    assert!((eigenvalues[1] + angle).abs() <= 1e-12);
}

#[test]
fn grassdist_planar_pair() {
    let dir = TempDir::new().unwrap();
    let angle = PI / 6.0;
    let p = write_line_projection(dir.path(), "p.json", 0.0);
    let q = write_line_projection(dir.path(), "q.json", angle);
    let out = run(&["grassdist", p.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    // The direct rotation between lines at angle theta has spectrum
    // {+theta, -theta}, so the Schatten-2 distance is sqrt(2) * theta.
    let expected = angle * 2.0f64.sqrt();
    assert!((parse_f64(&stdout_lines(&out)[0]) - expected).abs() <= 1e-12);
}

#[test]
fn verify_single_suite_writes_object_report() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--suite",
        "thompson",
        "--trials",
        "5",
        "--n",
        "3",
        "--seed",
        "7",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("thompson: passed=5 failed=0"));

    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.ends_with('\n'), "report ends with a newline");
    let body: Value = serde_json::from_str(&text).unwrap();
    assert!(body.is_object(), "single suite writes one report object");
    assert_eq!(body["suite"], "thompson");
    assert_eq!(body["passed"], 5);
    assert_eq!(body["failed"], 0);
    assert_eq!(body["config"]["seed"], 7);
    assert!(body["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn verify_all_writes_ordered_report_array() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--suite",
        "all",
        "--trials",
        "2",
        "--n",
        "3",
        "--m",
        "1",
        "--seed",
        "7",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_lines(&out).len(), 4, "one summary line per suite");

    let body: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let suites: Vec<&str> = body
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    assert_eq!(
        suites,
        ["thompson", "minimality", "uniqueness_descent", "grassmann"]
    );
}

#[test]
fn verify_zero_tolerance_control_exits_two_with_witnesses() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--suite",
        "grassmann",
        "--trials",
        "4",
        "--tol",
        "0",
        "--seed",
        "7",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2, "a found violation must exit 2");

    let body: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(body["failed"].as_u64().unwrap() > 0);
    assert!(
        !body["witnesses"].as_array().unwrap().is_empty(),
        "failures must be recorded with replayable witnesses"
    );
}

#[test]
fn verify_seed_env_flag_equivalence_and_precedence() {
    let dir = TempDir::new().unwrap();
    let args = |report: &Path| -> Vec<String> {
        [
            "verify", "--suite", "thompson", "--trials", "3", "--n", "3", "--report",
        ]
        .iter()
        .map(|s| s.to_string())
        .chain([report.to_str().unwrap().to_string()])
        .collect()
    };

    let by_flag = dir.path().join("flag.json");
    let mut cmd = unigeo();
    cmd.args(args(&by_flag)).args(["--seed", "77"]);
    assert!(cmd.output().unwrap().status.success());

    let by_env = dir.path().join("env.json");
    let mut cmd = unigeo();
    cmd.args(args(&by_env)).env("UNIGEO_SEED", "77");
    assert!(cmd.output().unwrap().status.success());

    assert_eq!(
        std::fs::read(&by_flag).unwrap(),
        std::fs::read(&by_env).unwrap(),
        "--seed 77 and UNIGEO_SEED=77 must produce identical reports"
    );

    // An explicit flag wins over the environment.
    let overridden = dir.path().join("override.json");
    let mut cmd = unigeo();
    cmd.args(args(&overridden))
        .args(["--seed", "5"])
        .env("UNIGEO_SEED", "77");
    assert!(cmd.output().unwrap().status.success());
    let body: Value =
        serde_json::from_str(&std::fs::read_to_string(&overridden).unwrap()).unwrap();
    assert_eq!(body["config"]["seed"], 5);

    // A malformed environment seed is a usage error.
    let mut cmd = unigeo();
    cmd.args(["verify", "--suite", "thompson", "--trials", "1"])
        .env("UNIGEO_SEED", "not-a-number");
    assert_eq!(cmd.output().unwrap().status.code(), Some(1));
}
