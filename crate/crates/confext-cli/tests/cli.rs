use std::process::{Command, Output};

use serde_json::Value;

fn confext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confext")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let out = confext(&a);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn ext_examples() {
    for (alg, sub, quot, want) in [
        ("vir", "M(0,0)", "M(0,1)", 3),
        ("vir", "C(-1)", "M(1,2)", 1),
        ("cur:sl2", "M(V3)", "M(V1)", 2),
    ] {
        let v = json(&["ext", "--alg", alg, "--sub", sub, "--quot", quot]);
        assert_eq!(v["ext_dim"], want, "{alg} {sub} {quot}");
        assert_eq!(v["basis"].as_array().unwrap().len(), want);
    }
}

#[test]
fn ext_reads_problem_files() {
    let dir = std::env::temp_dir().join(format!("confext-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.json");
    std::fs::write(&path, r#"{"algebra":"vir","sub":"M(0,0)","quot":"M(0,1)","bounds":{"dpart":4,"dlam":4}}"#).unwrap();
    let v = json(&["ext", "--file", path.to_str().unwrap()]);
    assert_eq!(v["ext_dim"], 3);
    assert_eq!(v["params"]["bounds"]["dpart"], 4);
}

#[test]
fn exit_codes() {
    let code = |a: &[&str]| confext(a).status.code();
    assert_eq!(code(&["ext", "--alg", "vir", "--sub", "M(0", "--quot", "M(0,1)"]), Some(2));
    assert_eq!(code(&["ext", "--alg", "vir"]), Some(2));
    assert_eq!(code(&["classify", "--degrees", "2..4"]), Some(2));
    assert_eq!(code(&["table", "--section", "7"]), Some(2));
    assert_eq!(code(&["ext", "--alg", "vir", "--sub", "M(0,sqrt(2))", "--quot", "M(0,sqrt(3))"]), Some(3));
    let bad = Command::new(env!("CARGO_BIN_EXE_confext"))
        .args(["classify", "--degrees", "6..6"])
        .env("CONFEXT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn classify_summary() {
    let out = confext(&["classify", "--degrees", "3..9"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert_eq!(
        last,
        "summary 3:every 4:every 5:every 6:{-4, 0} 7:{-5/2+1/2*sqrt(19), -5/2-1/2*sqrt(19)} 8:none 9:none"
    );
    let v = json(&["classify", "--degrees", "7..7", "--sqrt", "2"]);
    assert_eq!(v[0]["roots"].as_array().unwrap().len(), 0);
}

#[test]
fn table_rows_pass_and_output_is_stable() {
    let a = confext(&["table", "--section", "3", "--csv"]);
    let b = Command::new(env!("CARGO_BIN_EXE_confext"))
        .args(["table", "--section", "3", "--csv"])
        .env("CONFEXT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&["table", "--section", "3"]);
    assert_eq!(v["fail"], 0);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["status"] == "PASS"));
}

#[test]
fn oracle_small_window_skips_but_never_fails() {
    let v = json(&["oracle", "--window", "1", "--guard", "0"]);
    assert!(v["skipped"].as_u64().unwrap() > 0);
    assert_eq!(v["failed"].as_array().unwrap().len(), 0);
}

#[test]
fn selftest_passes() {
    let out = confext(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
