use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn liyorke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liyorke")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn export(dir: &Path, name: &str) -> String {
    let path = dir.join(format!("{name}.json"));
    let o = liyorke(&["export", name, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    path.to_str().unwrap().to_string()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_notfinite_matches_gallery_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = export(dir.path(), "notfinite");
    let out = dir.path().join("r.json");
    let o = liyorke(&["analyze", &spec, "--horizon", "64", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out);
    let entry = liyorke::gallery::entry("notfinite").unwrap();
    for (c, want) in entry.expected() {
        let got = &r["verdicts"][c.as_str()]["status"];
        assert_eq!(got, &serde_json::to_value(want).unwrap(), "{c}");
    }
    assert_eq!(r["audit"]["violations"], Value::Array(vec![]));
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let spec = export(dir.path(), "ly4-only");
    let a = liyorke(&["analyze", &spec]);
    let b = liyorke(&["analyze", &spec]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_weight_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let spec = export(dir.path(), "notfinite");
    let bad = fs::read_to_string(&spec).unwrap().replacen("\"1/2\"", "\"1/0\"", 1);
    let path = dir.path().join("bad.json");
    fs::write(&path, bad).unwrap();
    let o = liyorke(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line ") && err.contains("1/0"), "{err}");
}

#[test]
fn edited_report_fails_audit() {
    let dir = tempfile::tempdir().unwrap();
    let spec = export(dir.path(), "notfinite");
    let out = dir.path().join("r.json");
    assert_eq!(code(&liyorke(&["analyze", &spec, "--out", out.to_str().unwrap()])), 0);
    assert_eq!(code(&liyorke(&["analyze", out.to_str().unwrap()])), 0);

    let mut r = json(&out);
    r["verdicts"]["LY6"]["status"] = "Proved".into();
    r["verdicts"]["LY1"]["status"] = "Refuted".into();
    fs::write(&out, serde_json::to_string_pretty(&r).unwrap()).unwrap();
    let o = liyorke(&["analyze", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("LY6⇒LY1"));
}

#[test]
fn analyze_writes_trace_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = export(dir.path(), "notfinite");
    let csv = dir.path().join("t.csv");
    let o = liyorke(&["analyze", &spec, "--set", "0", "--horizon", "3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        fs::read_to_string(&csv).unwrap(),
        "n,numerator,denominator,is_infinite\n0,1,1,false\n1,1,2,false\n2,1,4,false\n3,1,8,false\n"
    );
}

#[test]
fn construct_wandering_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let inli = export(dir.path(), "inli");
    let out = dir.path().join("c.json");
    let o = liyorke(&["construct", &inli, "--what", "forward-wandering", "--set", "0", "--j", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let c = json(&out);
    assert_eq!(c["schema"], "liyorke/v1");
    assert_eq!(c["body"]["ks"].as_array().unwrap().len(), 4);

    let ly4 = export(dir.path(), "ly4-only");
    let o = liyorke(&["construct", &ly4, "--what", "backward-wandering", "--j", "5"]);
    assert_eq!(code(&o), 0);
    let c: Value = serde_json::from_slice(&o.stdout).unwrap();
    let w = liyorke::spec_file::parse_exact::<liyorke::Rational>(c["body"]["wandering_mass"]["exact"].as_str().unwrap()).unwrap();
    let b = liyorke::spec_file::parse_exact::<liyorke::Rational>(c["body"]["source_mass"]["exact"].as_str().unwrap()).unwrap();
    assert!(w.clone() + w >= b);
}

#[test]
fn identity_map_irregular_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.json");
    fs::write(
        &path,
        r#"{
  "schema": "liyorke/v1",
  "name": "identity",
  "kind": "table",
  "table": [
    { "atom": "0", "measure": "1", "image": "0" },
    { "atom": "1", "measure": "1/2", "image": "1" }
  ]
}"#,
    )
    .unwrap();
    let o = liyorke(&["construct", path.to_str().unwrap(), "--what", "irregular"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn construct_irregular_with_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = export(dir.path(), "infmeasconvcor2");
    let o = liyorke(&["construct", &spec, "--what", "irregular"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let c: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(c["body"]["interleavings"].as_u64().unwrap() >= 3);
    assert_eq!(c["body"]["pairs"].as_array().unwrap().len(), 3);
}

#[test]
fn gallery_exit_codes() {
    assert_eq!(code(&liyorke(&["gallery", "--name", "notfinite"])), 0);
    assert_eq!(code(&liyorke(&["gallery", "--name", "nosuch"])), 1);
    let o = liyorke(&["gallery", "--all", "--horizon", "64"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn shift_verdicts() {
    let status = |args: &[&str]| {
        let o = liyorke(args);
        assert_eq!(code(&o), 0);
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["body"]["status"].as_str().unwrap().to_string()
    };
    assert_eq!(status(&["shift", "--constant", "1"]), "Refuted");
    assert_eq!(status(&["shift", "--constant", "2"]), "Proved");
    assert_eq!(status(&["shift", "--periodic", "2,1/2;;0;2,1/2"]), "Refuted");
    let dir = tempfile::tempdir().unwrap();
    let spec = export(dir.path(), "ly1-not-ly4ly7");
    assert_eq!(status(&["shift", "--spec", &spec]), "Proved");
}

#[test]
fn export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in liyorke::gallery::list_entries() {
        let path = export(dir.path(), name);
        let text = fs::read_to_string(&path).unwrap();
        let spec = liyorke::spec_file::parse_spec::<liyorke::Rational>(&text).unwrap();
        assert_eq!(spec.system, liyorke::gallery::build(name).unwrap(), "{name}");
    }
}
