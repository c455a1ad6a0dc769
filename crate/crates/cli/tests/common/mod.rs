#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logspec"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn logspec")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Runs a subcommand with `--out <dir>/<name>.json` and returns the document.
pub fn run_json(dir: &Path, name: &str, args: &[&str]) -> Value {
    let out = dir.join(format!("{name}.json"));
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.to_str().unwrap().to_string();
    full.push("--out");
    full.push(&out_str);
    let o = run(&full);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    read_json(&out)
}

pub fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/v1").join(format!("{name}.schema.json"))
}

/// Validation errors of `instance` against a shipped schema, as strings.
pub fn schema_errors(name: &str, instance: &Value) -> Vec<String> {
    let schema = read_json(&schema_path(name));
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator
        .iter_errors(instance)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect()
}

pub fn assert_document(doc: &Value, result_schema: &str) {
    let errs = schema_errors("document", doc);
    assert!(errs.is_empty(), "document: {errs:?}");
    let errs = schema_errors(result_schema, &doc["result"]);
    assert!(errs.is_empty(), "{result_schema}: {errs:?}");
}
