//! End-to-end checks of the binary: output shapes, exit codes, determinism.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heckealg"))
}

fn descriptor(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("descriptors")
        .join(name)
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout parses as JSON")
}

#[test]
fn classify_reports_case_and_reducibility() {
    let out = bin()
        .args(["classify", "--json"])
        .arg(descriptor("case-iii.json"))
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let v = json_stdout(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["group"], "Sp");
    let block = &v["blocks"][0];
    assert_eq!(block["case"], "III");
    assert_eq!(block["a"], 3);
    assert_eq!(block["a_minus"], -1);
    assert_eq!(block["d_prime"], 2);
    assert_eq!(block["reducibility"], "2");
}

#[test]
fn classify_text_mode_summarizes_blocks() {
    let out = bin()
        .args(["classify"])
        .arg(descriptor("case-iii.json"))
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("group Sp"));
    assert!(text.contains("case III"));
    assert!(text.contains("reducibility 2"));
}

#[test]
fn classify_handles_non_self_dual_blocks() {
    let out = bin()
        .args(["classify", "--json"])
        .arg(descriptor("case-i.json"))
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let v = json_stdout(&out);
    let block = &v["blocks"][0];
    assert_eq!(block["case"], "I");
    assert_eq!(block["reducibility"], Value::Null);
    // Case I drops one simple reflection.
    assert_eq!(block["d_prime"], block["d"].as_i64().unwrap() - 1);
}

#[test]
fn malformed_descriptor_exits_2() {
    let mut file = tempfile::NamedTempFile::new().expect("tempfile");
    write!(file, "{{\"group\": \"Sp\", \"surprise\": true}}").unwrap();
    let out = bin()
        .args(["classify"])
        .arg(file.path())
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("surprise"));
}

#[test]
fn missing_file_exits_2() {
    let out = bin()
        .args(["classify", "/nonexistent/descriptor.json"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parity_violation_exits_1() {
    let mut file = tempfile::NamedTempFile::new().expect("tempfile");
    write!(
        file,
        r#"{{"group": "Sp",
            "blocks": [{{"label": "rho", "k": 1, "d": 2, "t": 1,
                         "self_dual": "orthogonal", "a": 2, "a_minus": 1}}],
            "h": {{"trivial": true, "jord": [], "tau_outer_invariant": true}}}}"#
    )
    .unwrap();
    let out = bin()
        .args(["classify"])
        .arg(file.path())
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("parity"));
}

#[test]
fn jord_gap_exits_1() {
    let mut file = tempfile::NamedTempFile::new().expect("tempfile");
    write!(
        file,
        r#"{{"group": "Sp",
            "blocks": [{{"label": "rho", "k": 1, "d": 1, "t": 1,
                         "self_dual": "orthogonal"}}],
            "h": {{"trivial": false, "jord": [["rho", 3]],
                   "tau_outer_invariant": true}}}}"#
    )
    .unwrap();
    let out = bin()
        .args(["classify"])
        .arg(file.path())
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).to_lowercase().contains("gap"));
}

#[test]
fn rootdatum_reports_walls() {
    let out = bin()
        .args(["rootdatum", "--json"])
        .arg(descriptor("mixture.json"))
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let v = json_stdout(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "rootdatum");
    assert_eq!(v["rank"], 3);
    assert_eq!(v["dims"], serde_json::json!([2, 1]));
    assert_eq!(v["cases"], serde_json::json!(["I", "III"]));
    assert_eq!(v["root_system"], "verified");
    assert!(!v["sigma_plus"].as_array().unwrap().is_empty());
    let walls = v["walls"].as_array().expect("walls array");
    assert_eq!(walls.len(), v["generators"].as_array().unwrap().len());
    let kinds: Vec<&str> = walls
        .iter()
        .map(|w| w["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["simple", "split-quadratic"]);
    let end = &walls[1];
    // The split wall carries the pair of specialization exponents and their
    // sum equals twice the quadratic q-exponent.
    let split = end["split_v_exponents"].as_array().expect("split pair");
    let sum: i64 = split.iter().map(|x| x.as_i64().unwrap()).sum();
    assert_eq!(sum, 2 * end["q_exponent"].as_i64().unwrap());
}

#[test]
fn verify_is_deterministic_for_a_fixed_seed() {
    let run = || {
        bin()
            .args(["verify"])
            .arg(descriptor("case-iii.json"))
            .args(["--samples", "8", "--seed", "42"])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    assert!(first.status.success());
    assert_eq!(stdout_str(&first), stdout_str(&second));
    assert!(stdout_str(&first).contains("seed 42"));
}

#[test]
fn verify_json_report_shape() {
    let out = bin()
        .args(["verify"])
        .arg(descriptor("case-ii.json"))
        .args(["--samples", "6", "--seed", "9", "--json"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "verify");
    assert_eq!(v["seed"], 9);
    assert_eq!(v["samples"], 6);
    assert_eq!(v["all_passed"], true);
    let checks = v["checks"].as_array().expect("checks array");
    assert_eq!(checks.len(), 12);
    for c in checks {
        assert_eq!(c["failures"], 0);
        assert_eq!(c["witness"], Value::Null);
    }
}

#[test]
fn verify_with_zero_samples_runs_structural_checks() {
    let out = bin()
        .args(["verify"])
        .arg(descriptor("case-ii.json"))
        .args(["--samples", "0", "--json"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["all_passed"], true);
    // The per-generator quadratic check still runs without samples.
    let quadratic = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "quadratic")
        .expect("quadratic check present");
    assert!(quadratic["cases"].as_u64().unwrap() > 0);
}

#[test]
fn verify_accepts_a_negative_sign_square_scalar() {
    let out = bin()
        .args(["verify"])
        .arg(descriptor("case-ii.json"))
        .args(["--samples", "5", "--j-square", "-1"])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let zero = bin()
        .args(["verify"])
        .arg(descriptor("case-ii.json"))
        .args(["--samples", "5", "--j-square", "0"])
        .output()
        .expect("binary runs");
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn eval_prints_quadratic_normal_form() {
    let out = bin()
        .args(["eval"])
        .arg(descriptor("case-ii.json"))
        .arg("T[s1.1]*T[s1.1]")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("q - 1"), "got: {text}");
    assert!(text.contains("T[s1.1]"), "got: {text}");
    assert!(text.contains("coefficients: sublattice-polynomial"));
    assert!(!text.contains("not closed"));
}

#[test]
fn eval_quadratic_relation_vanishes() {
    // (T_s + 1)(T_s - q^t) = 0 for a t=1 wall, written with numeric indices.
    let out = bin()
        .args(["eval"])
        .arg(descriptor("case-i.json"))
        .arg("(T[1,1]+1)*(T[1,1]-q)")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("0\n"), "got: {text}");
}

#[test]
fn eval_character_commutation_picks_up_a_sign() {
    // phi moves across an off-sublattice monomial at the cost of a root of
    // unity: with t = 2 the character value on the first basis vector is -1.
    let mut file = tempfile::NamedTempFile::new().expect("tempfile");
    write!(
        file,
        r#"{{"group": "Sp",
            "blocks": [{{"label": "pi", "k": 2, "d": 1, "t": 2,
                         "self_dual": "none"}}],
            "h": {{"trivial": true, "jord": [], "tau_outer_invariant": true}}}}"#
    )
    .unwrap();
    let out = bin()
        .args(["eval"])
        .arg(file.path())
        .arg("phi[1]*b[1] + b[1]*phi[1]")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("0\n"), "got: {text}");
}

#[test]
fn eval_sign_generator_squares_to_one() {
    let out = bin()
        .args(["eval"])
        .arg(descriptor("case-ii.json"))
        .arg("J[1]*J[1]")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(stdout_str(&out).starts_with("1\n"));
}

#[test]
fn eval_flags_rational_coefficients_without_failing() {
    // Moving a monomial off the sublattice across a wall leaves the Laurent
    // ring; the result is still printed and the run still succeeds.
    let out = bin()
        .args(["eval"])
        .arg(descriptor("mixture.json"))
        .arg("T[s1.1]*b[1,0,0]")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("coefficients: rational"), "got: {text}");
    assert!(text.contains("not closed"), "got: {text}");
}

#[test]
fn eval_json_report_matches_text_mode() {
    let out = bin()
        .args(["eval"])
        .arg(descriptor("mixture.json"))
        .args(["--json"])
        .arg("T[s1.1]*b[1,0,0]")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["coefficients"], "rational");
    assert_eq!(v["closed"], false);
    assert!(!v["terms"].as_array().unwrap().is_empty());
}

#[test]
fn eval_reads_expressions_from_a_file() {
    let mut file = tempfile::NamedTempFile::new().expect("tempfile");
    writeln!(file, "T[1,1]*T[1,1]").unwrap();
    writeln!(file).unwrap();
    writeln!(file, "J[1]*J[1]").unwrap();
    let out = bin()
        .args(["eval"])
        .arg(descriptor("case-ii.json"))
        .arg("--file")
        .arg(file.path())
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert_eq!(text.matches("-- ").count(), 2);
    assert_eq!(text.matches("coefficients:").count(), 2);
}

#[test]
fn eval_parse_error_exits_2() {
    let out = bin()
        .args(["eval"])
        .arg(descriptor("case-ii.json"))
        .arg("q + #")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("offset 4"));
}

#[test]
fn eval_unknown_generator_exits_1() {
    let out = bin()
        .args(["eval"])
        .arg(descriptor("case-ii.json"))
        .arg("T[s9.1]")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_covers_all_bundled_descriptors() {
    let out = bin()
        .args(["selftest", "--samples", "5", "--seed", "2"])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    assert_eq!(text.matches("ok    ").count(), 5);
    for name in ["case-i", "case-ii", "case-iib", "case-iii", "mixture"] {
        assert!(text.contains(name), "missing {name} in: {text}");
    }
    assert!(text.contains("seed 2"));
}
