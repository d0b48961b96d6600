use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_edist");

fn line_instance(map_t: &str) -> String {
    format!(
        r#"{{
  "schema_version": "1",
  "points": ["p0", "p1", "p2"],
  "metric": [[0, 1, 3], [1, 0, 2], [3, 2, 0]],
  "kappa": [[0, 1, 3], [1, 0, 2], [3, 2, 0]],
  "map_T": {map_t},
  "mu": {{"lambda": 1, "breakpoints": [0], "point_values": [0.9], "right_intercepts": [0.9], "slopes": [0]}}
}}"#
    )
}

const S3_MAP: &str = r#"{"p0": ["p1"], "p1": ["p1"], "p2": ["p2"]}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(BIN).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {stdout}"));
    (out.status.code().unwrap(), json)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "line.json", &line_instance(S3_MAP));
    assert_eq!(run(&["check", s(&good)]).0, 0);

    let zeroed =
        line_instance(S3_MAP).replacen("\"kappa\": [[0, 1, 3]", "\"kappa\": [[0, 0, 3]", 1);
    let mutant = write(&dir, "mutant.json", &zeroed);
    let (code, out) = run(&["check", s(&mutant)]);
    assert_eq!(code, 1);
    assert_eq!(out["report"]["verdicts"]["tau3"]["verdict"], "fail");

    let text = line_instance(S3_MAP);
    let truncated = write(&dir, "cut.json", &text[..text.len() / 2]);
    let (code, out) = run(&["check", s(&truncated)]);
    assert_eq!(code, 2);
    assert!(out["error"].as_str().unwrap().contains("line"));
}

#[test]
fn dist_values() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "line.json", &line_instance(S3_MAP));
    let (code, out) = run(&["dist", s(&f), "--a", "p0,p1", "--b", "p2"]);
    assert_eq!((code, out["value"].as_f64()), (0, Some(3.0)));
    let (_, out) = run(&[
        "dist",
        s(&f),
        "--a",
        "p0,p1",
        "--b",
        "p2",
        "--flavor",
        "hausdorff",
    ]);
    assert_eq!(out["value"].as_f64(), Some(3.0));
    let (_, out) = run(&["dist", s(&f), "--a", "p1,p2", "--b", "p1,p2"]);
    assert_eq!(out["value"].as_f64(), Some(0.0));
    assert_eq!(run(&["dist", s(&f), "--a", "p0", "--b", "q"]).0, 2);
}

#[test]
fn solve_outcomes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "line.json", &line_instance(S3_MAP));
    let (code, out) = run(&["solve", s(&f), "--x0", "p0"]);
    assert_eq!(code, 0);
    assert_eq!(out["fixed_point"], "p1");
    assert_eq!(out["path"], serde_json::json!(["p0", "p1"]));

    let (code, out) = run(&["solve", s(&f), "--x0", "p2"]);
    assert_eq!((code, out["path"].as_array().unwrap().len()), (0, 1));

    let cycle = r#"{
        "schema_version": "1", "points": ["p0", "p1"],
        "metric": [[0, 1], [1, 0]], "kappa": [[0, 1], [1, 0]],
        "map_T": {"p0": ["p1"], "p1": ["p0"]}
    }"#;
    let c = write(&dir, "cycle.json", cycle);
    let (code, out) = run(&["solve", s(&c), "--x0", "p0"]);
    assert_eq!(code, 1);
    assert_eq!(out["trace"]["outcome"]["kind"], "iteration_cap");
    assert_eq!(out["path"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a_s3.json", &line_instance(S3_MAP));
    let (code, out) = run(&["verify", s(&f), "--theorem", "T2.2"]);
    assert_eq!(code, 0);
    assert_eq!(out["report"]["fixed_points"], serde_json::json!([1, 2]));

    let dropped = write(
        &dir,
        "b_dropz.json",
        &line_instance(r#"{"p0": ["p1"], "p1": ["p2"], "p2": ["p2"]}"#),
    );
    let (code, out) = run(&["verify", s(&dropped), "--theorem", "T2.1"]);
    assert_eq!(code, 1);
    assert_eq!(out["report"]["conclusion"], "not_asserted");

    assert_eq!(run(&["verify", s(&f), "--theorem", "T2.3"]).0, 2);

    let (code, out) = run(&["verify", "--dir", s(dir.path()), "--theorem", "T2.1"]);
    assert_eq!(code, 1);
    assert_eq!(out["counts"]["pass"], 1);
    assert_eq!(out["counts"]["hypothesis_fail"], 1);
    assert_eq!(out["files"][0]["file"], "a_s3.json");
}

#[test]
fn gen_is_deterministic_and_logged() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let log = dir.path().join("run.log");
    let args = |out: &Path| {
        vec![
            "gen",
            "--seed",
            "41",
            "--n",
            "9",
            "--theorem",
            "T2.4",
            "--kappa",
            "asymmetric-closure",
            "--out",
        ]
        .into_iter()
        .map(String::from)
        .chain([
            out.to_str().unwrap().to_string(),
            "--log".into(),
            log.to_str().unwrap().into(),
        ])
        .collect::<Vec<_>>()
    };
    let ra = run(&args(&a).iter().map(String::as_str).collect::<Vec<_>>());
    let rb = run(&args(&b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(ra.0, 0);
    assert_eq!(ra.1["hash"], rb.1["hash"]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(run(&["verify", s(&a), "--theorem", "T2.4"]).0, 0);

    let lines: Vec<Value> = fs::read_to_string(&log)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["command"], "gen");
    assert_eq!(lines[0]["instance_hash"], ra.1["hash"]);
}

#[test]
fn gen_reproduces_from_provenance() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let (_, first) = run(&[
        "gen",
        "--seed",
        "5",
        "--n",
        "7",
        "--theorem",
        "nadler",
        "--space",
        "line",
        "--out",
        s(&a),
    ]);
    let file: Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    let seed = file["provenance"]["seed"].to_string();
    let profile = file["provenance"]["profile"].as_str().unwrap().to_string();
    let (_, again) = run(&["gen", "--seed", &seed, "--profile", &profile]);
    assert_eq!(first["hash"], again["hash"]);
}

#[test]
fn check_mt_on_a_bare_gauge() {
    let dir = TempDir::new().unwrap();
    let spike = r#"{"lambda": 1, "breakpoints": [0, 10], "point_values": [0, 0], "right_intercepts": [1, 0], "slopes": [-0.1, 0]}"#;
    let f = write(&dir, "spike.json", spike);
    let (code, out) = run(&["check-mt", s(&f)]);
    assert_eq!(code, 1);
    assert_eq!(out["report"]["statements"].as_array().unwrap().len(), 10);
    let g = write(&dir, "line.json", &line_instance(S3_MAP));
    assert_eq!(run(&["check-mt", s(&g)]).0, 0);
}
