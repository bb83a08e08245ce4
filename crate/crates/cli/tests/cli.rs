use std::path::Path;
use std::process::{Command, Output};

use opkit::operad::io::to_json;
use opkit::operad::presets::{preset, Preset};
use serde_json::Value;

fn opkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opkit")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn payload(o: &Output) -> Value {
    let mut v = json(o);
    v.as_object_mut().unwrap().remove("timing");
    v
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const CIRCLE: &str = r#"{"vertices": 3, "simplices": [[0,1],[1,2],[0,2]]}"#;
const SPHERE: &str = r#"{"vertices": 4, "simplices": [[0,1,2],[0,1,3],[0,2,3],[1,2,3]]}"#;

#[test]
fn koszul_presets() {
    let o = opkit(&["koszul", "--preset", "assoc", "--max-arity", "4", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["detail"]["h0"], serde_json::json!([2, 6, 24]));

    let o = opkit(&["koszul", "--preset", "comm", "--max-arity", "4", "--hat", "--json"]);
    assert_eq!(code(&o), 0);

    let o = opkit(&["koszul", "--preset", "lie", "--max-arity", "2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&opkit(&["koszul", "--preset", "pre-lie"])), 2);
    assert_eq!(code(&opkit(&["koszul", "--input", "/nonexistent.json"])), 2);
    assert_eq!(code(&opkit(&["koszul", "--preset", "assoc", "--max-arity", "1"])), 2);
    assert_eq!(code(&opkit(&["pd", "verify", "--in", "/nonexistent.json"])), 2);
    assert_eq!(code(&opkit(&["frobnicate"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"vertices": 2, "simplices": [[0, 5]]}"#);
    let out = dir.path().join("s.json");
    assert_eq!(code(&opkit(&["pd", "build", "--complex", &bad, "--order", "2", "--out", out.to_str().unwrap()])), 2);
}

#[test]
fn dual_of_comm_and_assoc() {
    let dir = tempfile::tempdir().unwrap();
    for (p, dims) in [(Preset::Comm, [1, 2, 6]), (Preset::Assoc, [2, 6, 24])] {
        let input = write(dir.path(), "in.json", &to_json(&preset(p)).unwrap());
        let out = dir.path().join("out.json");
        let o = opkit(&["dual", "--input", &input, "--out", out.to_str().unwrap(), "--json"]);
        assert_eq!(code(&o), 0);
        assert_eq!(json(&o)["detail"]["dims"], serde_json::json!(dims));
        let dual = std::fs::read_to_string(&out).unwrap();
        assert!(opkit::operad::io::from_json(&dual).is_ok());
    }
}

#[test]
fn pd_build_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text, order) in [("circle", CIRCLE, "4"), ("sphere", SPHERE, "3")] {
        let complex = write(dir.path(), &format!("{name}.json"), text);
        let out = dir.path().join(format!("{name}.s.json"));
        let out = out.to_str().unwrap();
        let o = opkit(&["pd", "build", "--complex", &complex, "--order", order, "--out", out, "--json"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
        let a = opkit(&["pd", "verify", "--in", out, "--json"]);
        let b = opkit(&["pd", "verify", "--in", out, "--json"]);
        assert_eq!(code(&a), 0);
        assert_eq!(payload(&a), payload(&b));
        let file: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
        assert_eq!(file["order"].as_u64().unwrap().to_string(), order);
        assert!(file["mu"].is_array());
    }
}

#[test]
fn pd_mutations_fail() {
    let dir = tempfile::tempdir().unwrap();
    let complex = write(dir.path(), "circle.json", CIRCLE);
    for m in ["sign", "skip", "perturb"] {
        let out = dir.path().join(format!("{m}.json"));
        let o = opkit(&["pd", "build", "--complex", &complex, "--order", "4", "--out", out.to_str().unwrap(), "--mutate", m]);
        assert_eq!(code(&o), 1, "{m}");
        assert_eq!(code(&opkit(&["pd", "verify", "--in", out.to_str().unwrap()])), 1, "{m}");
    }
}

#[test]
fn corrupted_structure_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let complex = write(dir.path(), "circle.json", CIRCLE);
    let out = dir.path().join("s.json");
    let out = out.to_str().unwrap();
    assert_eq!(code(&opkit(&["pd", "build", "--complex", &complex, "--order", "3", "--out", out])), 0);
    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let blocks = file["g"].as_array_mut().unwrap();
    let block = blocks.iter_mut().find(|b| b["order"] == 2).unwrap();
    let value = &mut block["terms"][0]["value"][0][1];
    let flipped = if value.as_str().unwrap().starts_with('-') { "1" } else { "-1" };
    *value = Value::String(flipped.into());
    let bad = write(dir.path(), "bad.json", &file.to_string());
    let o = opkit(&["pd", "verify", "--in", &bad, "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["pass"], Value::Bool(false));
}
