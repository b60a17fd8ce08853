use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn maps_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("maps")
}

fn sample(name: &str) -> String {
    maps_dir().join(name).to_str().unwrap().to_string()
}

fn posmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posmap"))
        .args(args)
        .env_remove("POSMAP_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = posmap(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (code(&out), v)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_cp_on_transpose_is_refuted() {
    let (c, v) = json(&["check-cp", &sample("transpose.map")]);
    assert_eq!(c, 1);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "falsified");
    assert_eq!(v["values"]["min_eigenvalue"], -1.0);
    assert_eq!(v["witness"]["value"], -1.0);
}

#[test]
fn check_cp_on_ad_is_certified() {
    let (c, v) = json(&["check-cp", &sample("ad_symmetric.map")]);
    assert_eq!(c, 0);
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn positivity_of_builtin_maps() {
    for name in [
        "identity.map",
        "transpose.map",
        "reduction.map",
        "lambda_half_3.map",
        "sp2_3.map",
    ] {
        let out = posmap(&["check-positive", &sample(name)]);
        assert_eq!(
            code(&out),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn k_positivity_of_lambda() {
    let (c, v) = json(&["check-k-positive", "--k", "2", &sample("lambda_half_3.map")]);
    assert_eq!(c, 0);
    assert!(v["values"]["value"].as_f64().unwrap() >= -1e-9);
    let (c, _) = json(&["check-k-positive", "--k", "3", &sample("lambda_half_3.map")]);
    assert_eq!(c, 1);
}

#[test]
fn dual_witness_reverifies_with_check_cp() {
    let (c, v) = json(&[
        "dual",
        "--cone-gen",
        &sample("transpose.map"),
        "--candidate",
        &sample("identity.map"),
    ]);
    assert_eq!(c, 1);
    assert_eq!(v["status"], "not-member");
    let text = v["summary"][0].as_str().unwrap();
    assert!(text.contains("eigenvalue -1"), "{text}");

    let dir = tempfile::tempdir().unwrap();
    let comp = write(
        dir.path(),
        "comp.map",
        &v["witness"]["composition"].to_string(),
    );
    let (c2, cp) = json(&["check-cp", &comp]);
    assert_eq!(c2, 1);
    let a = v["witness"]["value"].as_f64().unwrap();
    let b = cp["values"]["min_eigenvalue"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-9, "{a} vs {b}");

    // the saved cone element alone refutes membership again
    let psi = write(dir.path(), "psi.map", &v["witness"]["psi"].to_string());
    let (c3, again) = json(&[
        "dual",
        "--cone-gen",
        &psi,
        "--candidate",
        &sample("identity.map"),
    ]);
    assert_eq!(c3, 1);
    assert_eq!(again["witness"]["value"], v["witness"]["value"]);
}

#[test]
fn dual_membership_of_reduction_in_co_cp_dual() {
    let (c, v) = json(&[
        "dual",
        "--cone-gen",
        &sample("transpose.map"),
        "--candidate",
        &sample("reduction.map"),
        "--trials",
        "20",
    ]);
    assert_eq!(c, 0, "{v}");
}

#[test]
fn single_generator_decisions() {
    let t = sample("transpose.map");
    let (c, v) = json(&["cor4", "--gen", &t, "--candidate", &sample("reduction.map")]);
    assert_eq!(c, 0, "{v}");
    let (c, v) = json(&["cor4", "--gen", &t, "--candidate", &sample("identity.map")]);
    assert_eq!(c, 1);
    assert_ne!(v["witness"], Value::Null);
}

#[test]
fn symmetry_command() {
    assert_eq!(code(&posmap(&["prop5", &sample("ad_symmetric.map")])), 0);
    assert_eq!(code(&posmap(&["prop5", &sample("transpose.map")])), 0);
    let dir = tempfile::tempdir().unwrap();
    let e21 = write(
        dir.path(),
        "e21.map",
        r#"{"in_dim": 2, "out_dim": 2, "kind": "kraus", "data": [[[0, 0], [0, 0], [1, 0], [0, 0]]]}"#,
    );
    assert_eq!(code(&posmap(&["prop5", &e21])), 1);
}

#[test]
fn composition_suite_passes_from_cli() {
    let (c, v) = json(&[
        "verify", "lemma1", "--dim", "3", "--trials", "100", "--seed", "7",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["seed"], 7);
}

#[test]
fn seed_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_posmap"))
        .args([
            "--format", "json", "verify", "eq1", "--dim", "2", "--trials", "5",
        ])
        .env("POSMAP_SEED", "41")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 41);
    let out = Command::new(env!("CARGO_BIN_EXE_posmap"))
        .args([
            "--format", "json", "--seed", "3", "verify", "eq1", "--dim", "2", "--trials", "5",
        ])
        .env("POSMAP_SEED", "41")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 3);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&posmap(&[])), 64);
    assert_eq!(code(&posmap(&["frobnicate"])), 64);
    assert_eq!(code(&posmap(&["verify", "no-such-suite"])), 64);
    assert_eq!(
        code(&posmap(&["check-k-positive", &sample("identity.map")])),
        64
    );
    assert_eq!(
        code(&posmap(&[
            "--restarts",
            "0",
            "check-positive",
            &sample("identity.map")
        ])),
        64
    );
    assert_eq!(code(&posmap(&["verify", "eq1", "--dim", "1"])), 64);
    assert_eq!(code(&posmap(&["--help"])), 0);
    assert_eq!(code(&posmap(&["--version"])), 0);
}

#[test]
fn parse_errors_exit_65_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("syntax.map", "{\"in_dim\": 2,\n  \"out_dim\": }", "line 2"),
        (
            "short.map",
            r#"{"in_dim": 2, "out_dim": 2, "kind": "choi", "data": [[1, 0], [0, 0]]}"#,
            "expected 16 entries",
        ),
        (
            "pair.map",
            r#"{"in_dim": 2, "out_dim": 2, "kind": "choi", "data": [1, 2]}"#,
            "data[0]",
        ),
        (
            "mu.map",
            r#"{"in_dim": 3, "out_dim": 3, "kind": "builtin", "name": "lambda_mu"}"#,
            "params.mu",
        ),
        (
            "unknown.map",
            r#"{"in_dim": 2, "out_dim": 2, "kind": "builtin", "name": "identity", "colour": 1}"#,
            "colour",
        ),
    ];
    for (name, body, needle) in cases {
        let p = write(dir.path(), name, body);
        let out = posmap(&["check-cp", &p]);
        assert_eq!(code(&out), 65, "{name}");
        assert!(stderr(&out).contains(needle), "{name}: {}", stderr(&out));
    }
    let missing = dir.path().join("absent.map");
    assert_eq!(code(&posmap(&["check-cp", missing.to_str().unwrap()])), 65);
}

#[test]
fn mismatched_pair_dimensions_exit_65() {
    let out = posmap(&[
        "pair",
        &sample("identity.map"),
        &sample("lambda_half_3.map"),
    ]);
    assert_eq!(code(&out), 65);
}

#[test]
fn text_output_is_readable() {
    let out = posmap(&["check-cp", &sample("transpose.map")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check-cp: falsified"), "{text}");
    assert!(text.contains("seed = 0"));
}

#[test]
fn sequential_flag_gives_identical_reports() {
    let args = ["check-positive", "--restarts", "8"];
    let r = sample("reduction.map");
    let (_, mut a) = json(&[args[0], args[1], args[2], &r]);
    let (_, mut b) = json(&["--sequential", args[0], args[1], args[2], &r]);
    a.as_object_mut().unwrap().remove("wall_time");
    b.as_object_mut().unwrap().remove("wall_time");
    assert_eq!(a, b);
}
