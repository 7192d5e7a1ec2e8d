use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mubforge")).args(args).env_remove("MUBFORGE_THREADS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn catalog_lists_every_family() {
    let out = run(&["catalog"]);
    assert!(out.status.success());
    let v = json(&out);
    let names: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for name in [
        "field",
        "albert",
        "bkla",
        "dickson",
        "knuth",
        "cohen-ganley",
        "thas-payne",
        "ganley",
        "penttila-williams",
        "suzuki",
        "bblp",
        "coulter-matthews",
        "pseudo-planar",
    ] {
        assert!(names.contains(&name), "{name} missing");
    }
    for e in v["entries"].as_array().unwrap() {
        assert!(!e["constraints"].as_str().unwrap().is_empty());
        assert!(!e["native_q"].as_array().unwrap().is_empty());
    }
    let text = serde_json::to_string_pretty(&v).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), v);
    let listing = String::from_utf8(run(&["catalog", "--format", "text"]).stdout).unwrap();
    assert!(listing.lines().any(|l| l.starts_with("penttila-williams ")));
}

#[test]
fn build_field_q9() {
    let out = run(&["build", "mub", "--family", "field", "--q", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["bases"], 10);
    assert_eq!(v["verification"]["mode"]["mode"], "full");
    assert_eq!(v["verification"]["certificates"], serde_json::json!([0, 9]));
    assert_eq!(v["passed"], true);
}

#[test]
fn build_suzuki_spread() {
    let out = run(&["build", "spread", "--family", "suzuki", "--q", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["spread"]["members"], 65);
    assert_eq!(v["spread"]["covered_points"], 4095);
    assert_eq!(v["passed"], true);
}

#[test]
fn build_bblp_full_records_runtime() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = path(dir.path(), "bblp.json");
    let out = run(&["build", "mub", "--family", "bblp", "--q", "27", "--full", "--out", &out_path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["bases"], 28);
    assert_eq!(v["verification"]["failures"], 0);
    let timing: Value = serde_json::from_str(&std::fs::read_to_string(format!("{out_path}.timing.json")).unwrap()).unwrap();
    assert!(timing["seconds"]["verification"].as_f64().unwrap() >= 0.0);
}

#[test]
fn verify_and_export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let set = path(dir.path(), "f5.json");
    assert!(run(&["build", "mub", "--family", "field", "--q", "5", "--out", &set]).status.success());
    let out = run(&["verify", &set]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);

    let csv = path(dir.path(), "f5.csv");
    assert!(run(&["export", &set, "--format", "csv", "--out", &csv]).status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 2 + 6 * 5 * 5);

    let again = path(dir.path(), "again.json");
    assert!(run(&["export", &set, "--out", &again]).status.success());
    assert_eq!(json(&run(&["compare", &set, &again]))["identical"], true);
}

#[test]
fn verify_reports_a_corrupted_set() {
    let dir = tempfile::tempdir().unwrap();
    let set = path(dir.path(), "f5.json");
    assert!(run(&["build", "mub", "--family", "field", "--q", "5", "--out", &set]).status.success());
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&set).unwrap()).unwrap();
    let e = &mut v["bases"][1]["table"][2][3];
    *e = Value::from((e.as_u64().unwrap() + 1) % 5);
    std::fs::write(&set, serde_json::to_string(&v).unwrap()).unwrap();
    let out = run(&["verify", &set]);
    assert_eq!(out.status.code(), Some(1));
    let rep = json(&out);
    assert!(rep["failures"].as_u64().unwrap() > 0);
    assert!(!rep["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn dual_of_albert_is_the_cataloged_partner() {
    let dir = tempfile::tempdir().unwrap();
    let albert = path(dir.path(), "albert.json");
    let out = run(&["build", "presemifield", "--family", "albert", "--q", "27", "--out", &albert]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["symplectic"], false);
    let dual = path(dir.path(), "dual.json");
    let out = run(&["dual", &albert, "--out", &dual]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["catalog_partner"], "albert-symplectic");
    assert_eq!(v["matches_catalog_partner"], true);
    assert_eq!(v["dual"]["symplectic"], true);
    let out = run(&["verify", &dual]);
    assert_eq!(json(&out)["symplectic"], true);
}

#[test]
fn planar_and_symplectic_paths_agree_at_16() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.json");
    let b = path(dir.path(), "b.json");
    assert!(run(&["build", "mub", "--family", "field", "--q", "16", "--path", "commutative", "--out", &a]).status.success());
    assert!(run(&["build", "mub", "--family", "field", "--q", "16", "--path", "symplectic", "--out", &b]).status.success());
    let out = run(&["compare", &a, &b]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["identical"], true);

    let c = path(dir.path(), "c.json");
    assert!(run(&["build", "mub", "--family", "field", "--q", "9", "--out", &c]).status.success());
    assert_eq!(run(&["compare", &a, &c]).status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec!["build", "mub", "--family", "field", "--q", "243", "--samples", "2000", "--seed", "7", "--out"]
            .into_iter()
            .map(String::from)
            .chain([out.to_string()])
            .collect::<Vec<_>>()
    };
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    let ra = Command::new(env!("CARGO_BIN_EXE_mubforge")).args(args(&a)).env("MUBFORGE_THREADS", "1").output().unwrap();
    let rb = Command::new(env!("CARGO_BIN_EXE_mubforge")).args(args(&b)).env("MUBFORGE_THREADS", "3").output().unwrap();
    assert!(ra.status.success() && rb.status.success());
    assert_eq!(ra.stdout, rb.stdout);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v = json(&ra);
    assert_eq!(v["verification"]["mode"], serde_json::json!({"mode": "sampled", "samples": 2000, "seed": 7}));
    let timing: Value = serde_json::from_str(&std::fs::read_to_string(format!("{b}.timing.json")).unwrap()).unwrap();
    assert_eq!(timing["threads"], 3);
}

#[test]
fn pseudo_planar_paths() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["build", "mub", "--family", "pseudo-planar", "--q", "8", "--monomial", "1,0,1", "--monomial", "1,1,2"];
    let sets: Vec<String> = ["pseudo-planar", "commutative", "symplectic"]
        .iter()
        .map(|p| {
            let out = path(dir.path(), &format!("{p}.json"));
            let mut args = base.to_vec();
            args.extend(["--path", p, "--out", &out]);
            let r = run(&args);
            assert_eq!(r.status.code(), Some(0), "{p}: {}", String::from_utf8_lossy(&r.stderr));
            out
        })
        .collect();
    assert_eq!(json(&run(&["compare", &sets[0], &sets[1]]))["identical"], true);
    assert_eq!(json(&run(&["compare", &sets[1], &sets[2]]))["identical"], true);
    // x^3 alone is not pseudo-planar on GF(8).
    assert_eq!(run(&["build", "mub", "--family", "pseudo-planar", "--q", "8", "--monomial", "1,0,1"]).status.code(), Some(2));
}

#[test]
fn bad_parameters_exit_with_two() {
    for args in [
        vec!["build", "mub", "--family", "nope", "--q", "9"],
        vec!["build", "mub", "--family", "field", "--q", "12"],
        vec!["build", "mub", "--family", "albert", "--q", "9"],
        vec!["build", "mub", "--family", "ganley", "--q", "9"],
        vec!["build", "spread", "--family", "coulter-matthews", "--q", "27"],
        vec!["build", "mub", "--family", "field", "--q", "9", "--full", "--samples", "3"],
        vec!["build", "mub"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_mubforge")).args(["catalog"]).env("MUBFORGE_THREADS", "0").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_files_are_schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    for body in ["not json", "[1, 2]", r#"{"bases": [{"label": "x", "kind": "exponent"}], "n": 2, "m": 2}"#, r#"{"unrelated": 1}"#] {
        std::fs::write(&bad, body).unwrap();
        assert_eq!(run(&["verify", &bad]).status.code(), Some(2), "{body}");
    }
    assert_eq!(run(&["verify", &path(dir.path(), "missing.json")]).status.code(), Some(2));
}

#[test]
fn spread_files_verify() {
    let dir = tempfile::tempdir().unwrap();
    let sp = path(dir.path(), "sp.json");
    assert!(run(&["build", "spread", "--family", "dickson", "--q", "9", "--out", &sp]).status.success());
    let v = json(&run(&["verify", &sp]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["symplectic"], false);
    assert!(run(&["build", "spread", "--family", "knuth", "--q", "9", "--out", &sp]).status.success());
    assert_eq!(json(&run(&["verify", &sp]))["symplectic"], true);
}
