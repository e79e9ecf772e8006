use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hf"))
        .args(args)
        .env_remove("HF_CACHE_DIR")
        .output()
        .expect("hf runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--out", "json"]);
    let o = hf(&all);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(name);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn assert_valid(schema_name: &str, v: &Value) {
    let validator = schema(schema_name);
    let errors: Vec<String> = validator
        .iter_errors(v)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}");
}

#[test]
fn every_command_matches_its_schema() {
    for args in [
        &["hat", "-g", "2"][..],
        &["hat", "-g", "2", "--ring", "F2"],
        &["plus", "-g", "3"],
        &["plus", "-g", "3", "--reduced"],
        &["plus", "-g", "3", "-k", "1"],
        &["infinity", "-g", "3", "--ring", "Fp:3"],
    ] {
        assert_valid("floer_table.schema.json", &json(args));
    }
    assert_valid(
        "nontorsion.schema.json",
        &json(&["nontorsion", "-g", "3", "-k", "-1"]),
    );
    assert_valid(
        "action.schema.json",
        &json(&["action", "-g", "5", "-k", "1"]),
    );
    assert_valid(
        "action.schema.json",
        &json(&[
            "action",
            "-g",
            "5",
            "-k",
            "1",
            "--xi",
            r#"[{"blade":[],"coeff":"1"}]"#,
            "--u-power",
            "3",
        ]),
    );
    assert_valid("eg.schema.json", &json(&["eg", "-g", "3"]));
    assert_valid("beta.schema.json", &json(&["beta", "-g", "2"]));
    assert_valid(
        "matrix.schema.json",
        &json(&["slice", "-g", "2", "--op", "F", "--degree", "0"]),
    );
    assert_valid(
        "matrix.schema.json",
        &json(&[
            "slice", "-g", "2", "--op", "h", "-k", "-1", "--degree", "1", "--ring", "Fp:5",
        ]),
    );
    assert_valid(
        "verify_report.schema.json",
        &json(&["verify", "--suite", "swap", "--max-genus", "2"]),
    );
}

#[test]
fn slice_export_feeds_snf() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let o = hf(&[
        "slice",
        "--genus",
        "3",
        "--op",
        "F",
        "--degree",
        "1",
        "--ring",
        "Z",
        "--out",
        m.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let snf = json(&["snf", "--input", m.to_str().unwrap()]);
    assert_valid("snf.schema.json", &snf);
    // Coker F_1 at g = 3 has rank C(6,2) − C(6,0) = 14 and is the torsion of HF⁺ in degree 1/2.
    assert_eq!(
        snf["cokernel"]["free_rank"],
        hf_core::verify::cokernel_rank_closed_form(3, 1)
    );
    assert_eq!(hf_core::verify::cokernel_rank_closed_form(3, 1), 14);
    let plus = json(&["plus", "-g", "3", "--degrees", "0..0"]);
    assert_eq!(plus["entries"][0]["deg"], "1/2");
    assert_eq!(
        snf["cokernel"]["invariant_factors"],
        plus["entries"][0]["group"]["invariant_factors"]
    );
}

#[test]
fn spec_examples() {
    let o = hf(&["hat", "--genus", "3", "--out", "tsv"]);
    let text = stdout(&o);
    assert!(
        text.contains("-1/2\tZ^29\t29") && text.contains("\n1/2\tZ^29\t29"),
        "{text}"
    );
    let inf = json(&["infinity", "--genus", "3", "--ring", "F2"]);
    for e in inf["entries"].as_array().unwrap() {
        assert_eq!(e["group"]["free_rank"], 36);
    }
    let o = hf(&["verify", "--suite", "sl2", "--max-genus", "4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(hf(&["hat"]).status.code(), Some(2));
    assert_eq!(
        hf(&["hat", "-g", "2", "--ring", "F4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hf(&["plus", "-g", "2", "--degrees", "3..1"]).status.code(),
        Some(2)
    );
    assert_eq!(hf(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(hf(&["frobnicate"]).status.code(), Some(2));
    let o = hf(&["infinity", "-g", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("extended-scale required"));
    assert_eq!(hf(&["verify", "--max-genus", "7"]).status.code(), Some(2));
}

#[test]
fn failing_verification_exits_one() {
    // The U-kernel statement at the literal degree fails from genus 4 on.
    let o = hf(&["verify", "--suite", "plus", "--max-genus", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL plus.u_kernel_stated"));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hf"))
            .args(["eg", "-g", "3", "--out", "json"])
            .env("HF_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = run();
    assert_eq!(first.stdout, second.stdout);

    // A cached file is trusted as is.
    let path = files[0].as_ref().unwrap().path();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["total_marker"] = Value::Bool(true);
    std::fs::write(&path, v.to_string()).unwrap();
    let third: Value = serde_json::from_slice(&run().stdout).unwrap();
    assert_eq!(third["total_marker"], true);
}

#[test]
fn jobs_flag_does_not_change_results() {
    assert_eq!(
        json(&["plus", "-g", "3", "--jobs", "1"]),
        json(&["plus", "-g", "3", "--jobs", "4"])
    );
    assert_eq!(
        hf(&["hat", "-g", "2", "--jobs", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn window_flag() {
    let t = json(&["plus", "-g", "2", "--degrees", "-1..1"]);
    let degs: Vec<&str> = t["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["deg"].as_str().unwrap())
        .collect();
    assert_eq!(degs, ["-1/2", "1/2", "3/2"]);
}
