use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hss")).args(args).env_remove("HSS_SEED").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hss-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const IDENTITY_G11: &str = r#"{"maps": [[{"num": {"vars": ["z11"], "terms": [{"exp": [1], "re": "1", "im": "0"}]},
  "den": {"vars": [], "terms": [{"exp": [], "re": "1", "im": "0"}]}}]], "lambdas": ["1"]}"#;

#[test]
fn describe_grassmannian() {
    let out = hss(&["describe", "--space", "typeI:2,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!((v["n"].as_u64(), v["N"].as_u64(), v["lambda"].as_u64()), (Some(4), Some(5), Some(4)));
    assert_eq!(v["psi"].as_array().map(Vec::len), Some(5));
    assert_eq!(v["config"]["command"], "describe");
}

#[test]
fn einstein_quadric() {
    let out = hss(&["einstein", "--space", "typeIV:3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["lambda"].as_u64(), Some(3));
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["config"]["seed"].as_u64(), Some(7));
}

#[test]
fn volume_check_identity() {
    let p = temp_file("id.json", IDENTITY_G11);
    let out = hss(&["volume-check", "--space", "typeI:1,1", "--maps", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["lambdas"][0]["parsed"], "float");
    let out = hss(&["isometry-check", "--space", "typeI:1,1", "--maps", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn volume_check_wrong_lambda_fails() {
    let p = temp_file("half.json", &IDENTITY_G11.replace(r#"["1"]"#, r#"["1/2"]"#));
    let out = hss(&["volume-check", "--space", "typeI:1,1", "--maps", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["lambdas"][0]["parsed"], "exact");
    assert_eq!(v["lambdas"][0]["text"], "1/2");
}

#[test]
fn malformed_input_is_a_usage_error() {
    let p = temp_file("bad.json", "[\n  [{\"num\": }]\n]");
    let out = hss(&["volume-check", "--space", "typeI:1,1", "--maps", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, column"), "{err}");
    assert_eq!(hss(&["describe", "--space", "typeI:3,2"]).status.code(), Some(2));
    assert_eq!(hss(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let a = hss(&["metric", "--space", "typeIII:2", "--seed", "11"]);
    let b = hss(&["metric", "--space", "typeIII:2", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = hss(&["metric", "--space", "typeIII:2", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn env_seed_overrides_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_hss"))
        .args(["metric", "--space", "typeI:1,2", "--seed", "3"])
        .env("HSS_SEED", "9")
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["config"]["seed"].as_u64(), Some(9));
    assert_eq!(v["config"]["seed_source"], "env");
}

#[test]
fn floats_have_seventeen_digits() {
    let out = hss(&["metric", "--space", "typeI:1,1", "--point", "[[0.1, 0.0]]"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().find(|l| l.contains("\"rho\"")).unwrap();
    assert!(line.contains("1.0100000000000000e0"), "{line}");
}

#[test]
fn hypothesis_reports() {
    for (cmd, space, h) in [("hyp1", "typeIV:3", "I"), ("hyp2", "typeI:2,2", "II"), ("hyp3", "typeIV:3", "III")] {
        let out = hss(&[cmd, "--space", space]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let v = json_of(&out);
        assert_eq!(v["hypothesis"], h);
        for k in ["space", "witness", "evidence", "seed"] {
            assert!(v.get(k).is_some(), "{cmd} lacks {k}");
        }
        assert!(!v["witness"].is_null());
    }
    let v = json_of(&hss(&["hyp3", "--space", "e27"]));
    assert_eq!(v["evidence"], "support-only");
}

#[test]
fn hyp1_budget_exhaustion_is_reported() {
    let out = hss(&["hyp1", "--space", "typeII:4", "--max-jet-order", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert!(v["witness"].is_null());
    assert_eq!(v["search"]["status"], "not_found_within_budget");
}

#[test]
fn selftest_mutation_and_tolerance_hooks() {
    let out = hss(&["selftest", "--only", "3", "--corrupt-octonion-table"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Cayley identity"));
    let out = hss(&["selftest", "--only", "4", "--float-tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["criteria"][0]["failure"], "tolerance");
    let out = hss(&["selftest", "--only", "1,3"]);
    assert_eq!(out.status.code(), Some(0));
}
