//! End-to-end tests of the `ceresa` binary: exit codes, JSON shapes,
//! determinism, the text renderer, and the error paths.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ceresa"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("ceresa-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn json_stdout(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const KLEIN: &str = r#"{"monomials": {"3,1,0": "1", "0,3,1": "1", "1,0,3": "1"}}"#;
const TAU: &str = r#"{"re": [[0.0,0.1,0.05],[0.1,0.0,0.1],[0.05,0.1,0.0]],
                      "im": [[0.7,0,0],[0,0.7,0],[0,0,0.7]]}"#;

#[test]
fn qc_of_klein() {
    let q = write_temp("klein.json", KLEIN);
    let out = bin().args(["qc", "--quartic"]).arg(&q).output().unwrap();
    let v = json_stdout(&out);
    assert_eq!(v["rank"], 6);
    assert_eq!(v["det"], "-1/4096");
    assert_eq!(v["matrix"][0][3], "1/4");
}

#[test]
fn rc_of_e0_squared() {
    let h = write_temp("h.json", r#"{"p": ["1","0","0"], "q": ["0","0","0"]}"#);
    let out = bin().args(["rc", "--h"]).arg(&h).output().unwrap();
    let v = json_stdout(&out);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["matrix"][1][2], "4");
    assert_eq!(v["matrix"][5][5], "-2");
}

#[test]
fn dc_sums_the_parts() {
    let q = write_temp("klein2.json", KLEIN);
    let h = write_temp("h2.json", r#"{"p": ["0","0","0"], "q": ["0","0","0"]}"#);
    let out = bin()
        .args(["dc", "--quartic"])
        .arg(&q)
        .arg("--h")
        .arg(&h)
        .output()
        .unwrap();
    let v = json_stdout(&out);
    assert_eq!(v["rank"], 6);
}

#[test]
fn roundtrip_command() {
    let q = write_temp("klein3.json", KLEIN);
    let out = bin().args(["roundtrip", "--quartic"]).arg(&q).output().unwrap();
    let v = json_stdout(&out);
    assert_eq!(v["roundtrip_exact"], true);
}

#[test]
fn change_basis_preserves_rank() {
    let q = write_temp("klein4.json", KLEIN);
    let g = write_temp(
        "g.json",
        r#"[["1","1","0"],["0","1","0"],["0","0","1"]]"#,
    );
    let out = bin()
        .args(["change-basis", "--quartic"])
        .arg(&q)
        .arg("--matrix")
        .arg(&g)
        .output()
        .unwrap();
    let v = json_stdout(&out);
    assert_eq!(v["transported_form"]["rank"], 6);
    assert_eq!(v["det_g"], "1");
}

#[test]
fn complex_all() {
    let out = bin().args(["complex"]).output().unwrap();
    let v = json_stdout(&out);
    let c = v["complexes"].as_array().unwrap();
    assert_eq!(c.len(), 3);
    assert_eq!(c[0]["homology"], serde_json::json!([0, 15, 0]));
    assert_eq!(c[1]["homology"], serde_json::json!([0, 0, 55]));
    assert_eq!(c[2]["homology"], serde_json::json!([0, 0, 84]));
}

#[test]
fn group_order_bundled() {
    let out = bin().args(["group-order"]).output().unwrap();
    let v = json_stdout(&out);
    assert_eq!(v["order"], 168);
}

#[test]
fn group_multiplicity_s4b() {
    let out = bin()
        .args(["group-multiplicity", "--module", "s4b"])
        .output()
        .unwrap();
    let v = json_stdout(&out);
    assert_eq!(v["trivial_multiplicity"], "1");
}

#[test]
fn corrupted_generator_file_fails() {
    let g = write_temp("bad-gens.json", r#"{"generators": [[["1"]]]}"#);
    let out = bin().args(["group-order", "--generators"]).arg(&g).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error"), "stderr: {err}");
}

#[test]
fn theta_and_chi18() {
    let t = write_temp("tau.json", TAU);
    let out = bin()
        .args(["theta", "--char", "0,0,0;0,0,0", "--tau"])
        .arg(&t)
        .output()
        .unwrap();
    let v = json_stdout(&out);
    assert!(v["abs"].as_f64().unwrap() > 0.5);
    assert_eq!(v["even"], true);

    let out = bin().args(["chi18", "--tau"]).arg(&t).output().unwrap();
    let v = json_stdout(&out);
    let a = v["abs"].as_f64().unwrap();
    assert!(a > 1e-8 && a < 1e-4, "abs = {a}");
}

#[test]
fn min_null_and_transform() {
    let t = write_temp("tau2.json", TAU);
    let out = bin().args(["min-null", "--tau"]).arg(&t).output().unwrap();
    let v = json_stdout(&out);
    assert_eq!(v["hyperelliptic_candidate"], false);

    let out = bin()
        .args(["transform-check", "--kind", "inversion", "--tau"])
        .arg(&t)
        .output()
        .unwrap();
    let v = json_stdout(&out);
    assert!(v["relative_deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn cusp_order_slope() {
    let t = write_temp("tau3.json", TAU);
    let out = bin()
        .args(["cusp-order", "--t-samples", "1.0,1.5,2.0,2.5,3.0,3.5,4.0", "--tau"])
        .arg(&t)
        .output()
        .unwrap();
    let v = json_stdout(&out);
    let slope = v["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() < 0.1);
}

#[test]
fn rejects_non_positive_definite_tau() {
    let t = write_temp(
        "bad-tau.json",
        r#"{"re": [[0,0,0],[0,0,0],[0,0,0]], "im": [[1,0,0],[0,-1,0],[0,0,1]]}"#,
    );
    let out = bin().args(["chi18", "--tau"]).arg(&t).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("positive definite"));
}

#[test]
fn verify_suites_pass_and_are_deterministic() {
    let run = |extra: &[&str]| -> Vec<u8> {
        let out = bin().args(["klein-verify"]).args(extra).output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let a = run(&[]);
    let b = run(&[]);
    assert_eq!(a, b, "JSON reruns must be byte-identical");
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["all_passed"], true);
    assert!(v["reports"].as_array().unwrap().len() >= 8);
    // runtimes appear only on request
    assert!(v["reports"][0].get("runtime_ms").is_none());
    let with_timings = bin().args(["klein-verify", "--timings"]).output().unwrap();
    let vt: Value = serde_json::from_slice(&with_timings.stdout).unwrap();
    assert!(vt["reports"][0].get("runtime_ms").is_some());
}

#[test]
fn coho_verify_seed_changes_keep_verdicts() {
    let verdicts = |seed: &str| -> Vec<bool> {
        let out = bin()
            .args(["coho-verify", "--trials", "5", "--seed", seed])
            .output()
            .unwrap();
        assert!(out.status.success());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v["reports"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["pass"].as_bool().unwrap())
            .collect()
    };
    assert_eq!(verdicts("1"), verdicts("424242"));
}

#[test]
fn low_precision_marks_the_slope_check() {
    let out = bin()
        .args(["chi18-verify", "--eps", "0.01"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["check"].as_str().unwrap())
        .collect();
    assert!(names.iter().any(|n| n.contains("low precision")), "{names:?}");
}

#[test]
fn cusp_order_direction_flag() {
    let t = write_temp("tau4.json", TAU);
    let out = bin()
        .args(["cusp-order", "--direction", "1", "--tau"])
        .arg(&t)
        .output()
        .unwrap();
    let v = json_stdout(&out);
    let slope = v["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() < 0.1);
}

#[test]
fn text_format_renders_table() {
    let out = bin()
        .args(["klein-verify", "--format", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS] klein_qc_rank"));
    assert!(text.contains("result: PASS"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("ceresa-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{}-out.json", std::process::id()));
    let q = write_temp("klein5.json", KLEIN);
    let out = bin()
        .args(["qc", "--quartic"])
        .arg(&q)
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rank"], 6);
}

#[test]
fn env_precision_is_echoed() {
    let out = bin()
        .env("CERESA_PRECISION", "9")
        .args(["klein-verify"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["precision"], 9);
    assert_eq!(v["config"]["precision_from_env"], true);
    // an explicit flag wins over the environment
    let out = bin()
        .env("CERESA_PRECISION", "9")
        .args(["klein-verify", "--precision", "11"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["precision"], 11);
    assert_eq!(v["config"]["precision_from_env"], false);
}
