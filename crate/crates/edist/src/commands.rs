//! One function per verb. Each returns the JSON to print and the exit code.

use std::fs;
use std::path::{Path, PathBuf};

use edist_core::gen::{generate_reseeding, mutate, GenProfile};
use edist_core::hyperspace::{dkappa, hausdorff, xi};
use edist_core::mt::check_all;
use edist_core::solver::{
    cauchy_diagnostic, default_max_iter, iterate, verify_theorem, OrbitOutcome, TheoremId,
};
use edist_core::spaces::classify;
use serde_json::{json, Value};

use crate::format::{parse_and_load, FormatError, GaugeFile, InstanceFile, Loaded};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Reseed attempts `gen` makes before giving up.
pub const GEN_ATTEMPTS: u64 = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: Value,
    pub instance_hash: Option<String>,
}

impl Outcome {
    fn new(code: i32, output: Value, instance_hash: Option<String>) -> Self {
        Self {
            code,
            output,
            instance_hash,
        }
    }

    fn input_error(err: impl std::fmt::Display) -> Self {
        Self::new(EXIT_INPUT, json!({ "error": err.to_string() }), None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Flavor {
    Dkappa,
    Hausdorff,
    Xi,
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Loaded, String> {
    parse_and_load(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

/// Axiom classification of `κ`.
pub fn check(path: &Path) -> Outcome {
    let loaded = match load(path) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let report = classify(&loaded.kappa);
    let output = json!({ "labels": loaded.labels(), "report": to_value(&report) });
    Outcome::new(pass_code(report.all_pass()), output, Some(loaded.hash))
}

/// The ten MT statements for `mu`, read from an instance file or from a
/// bare gauge object.
pub fn check_mt(path: &Path) -> Outcome {
    let text = match read(path) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(e),
    };
    let gauge = match serde_json::from_str::<GaugeFile>(&text) {
        Ok(g) => g.to_gauge().map(|g| (g, None)),
        Err(_) => parse_and_load(&text).and_then(|l| {
            let hash = Some(l.hash.clone());
            l.mu.ok_or(FormatError::Missing("mu")).map(|g| (g, hash))
        }),
    };
    match gauge {
        Ok((mu, hash)) => {
            let report = check_all(&mu);
            Outcome::new(
                pass_code(report.all_pass()),
                json!({ "report": to_value(&report) }),
                hash,
            )
        }
        Err(e) => Outcome::input_error(format!("{}: {e}", path.display())),
    }
}

pub fn dist(path: &Path, a: &[String], b: &[String], flavor: Flavor) -> Outcome {
    let loaded = match load(path) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let sets = loaded.subset(a).and_then(|sa| Ok((sa, loaded.subset(b)?)));
    let (sa, sb) = match sets {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(e),
    };
    let value = match flavor {
        Flavor::Dkappa => dkappa(&loaded.kappa, &sa, &sb),
        Flavor::Hausdorff => hausdorff(&loaded.space, &sa, &sb),
        Flavor::Xi => xi(&loaded.kappa, &sa, &sb),
    };
    let flavor = to_value(&format!("{flavor:?}").to_lowercase());
    Outcome::new(
        EXIT_OK,
        json!({ "flavor": flavor, "a": a, "b": b, "value": value }),
        Some(loaded.hash),
    )
}

/// Greedy orbit from `x0`; exit 0 only when it reaches a fixed point.
pub fn solve(path: &Path, x0: &str, max_iter: Option<usize>) -> Outcome {
    let loaded = match load(path) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let run = || -> Result<(i32, Value), String> {
        let inst = loaded.instance().map_err(|e| e.to_string())?;
        let start = loaded.index(x0).map_err(|e| e.to_string())?;
        let cap = max_iter.unwrap_or_else(|| default_max_iter(inst.len()));
        let trace = iterate(&inst.kappa, &inst.map, start, cap).map_err(|e| e.to_string())?;
        let cauchy = cauchy_diagnostic(&trace, &inst.kappa);
        let labels = loaded.labels();
        let path: Vec<&str> = trace.points.iter().map(|&p| labels[p].as_str()).collect();
        let code = pass_code(matches!(trace.outcome, OrbitOutcome::FixedPoint(_)));
        let fixed = match trace.outcome {
            OrbitOutcome::FixedPoint(v) => Value::from(labels[v].as_str()),
            _ => Value::Null,
        };
        Ok((
            code,
            json!({ "labels": labels, "path": path, "fixed_point": fixed, "trace": to_value(&trace), "cauchy": to_value(&cauchy) }),
        ))
    };
    match run() {
        Ok((code, output)) => Outcome::new(code, output, Some(loaded.hash.clone())),
        Err(e) => Outcome::input_error(e),
    }
}

pub fn verify(path: &Path, theorem: TheoremId) -> Outcome {
    let loaded = match load(path) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let report = loaded
        .instance()
        .map_err(|e| e.to_string())
        .and_then(|inst| verify_theorem(&inst, theorem).map_err(|e| e.to_string()));
    match report {
        Ok(r) => {
            let output = json!({ "labels": loaded.labels(), "report": to_value(&r) });
            Outcome::new(r.exit_code(), output, Some(loaded.hash))
        }
        Err(e) => Outcome::input_error(format!("{}: {e}", path.display())),
    }
}

/// Verifies every `*.json` file in `dir`, in file-name order.
///
/// The exit code is the most severe per-file code, ranking violation (3)
/// above malformed input (2) above a failed hypothesis (1).
pub fn verify_dir(dir: &Path, theorem: TheoremId) -> Outcome {
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect(),
        Err(e) => return Outcome::input_error(format!("{}: {e}", dir.display())),
    };
    files.sort();
    let mut counts = [0usize; 4];
    let mut rows = Vec::with_capacity(files.len());
    for f in &files {
        let o = verify(f, theorem);
        counts[o.code as usize] += 1;
        let name = f
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let conclusion = o
            .output
            .pointer("/report/conclusion")
            .cloned()
            .unwrap_or(Value::Null);
        rows.push(json!({ "file": name, "exit_code": o.code, "conclusion": conclusion }));
    }
    let code = [EXIT_VIOLATION, EXIT_INPUT, EXIT_FAIL]
        .into_iter()
        .find(|&c| counts[c as usize] > 0)
        .unwrap_or(EXIT_OK);
    let output = json!({
        "theorem": theorem.name(),
        "files": rows,
        "counts": {
            "pass": counts[0],
            "hypothesis_fail": counts[1],
            "malformed": counts[2],
            "violation": counts[3],
        },
    });
    Outcome::new(code, output, None)
}

/// Generates an instance, writes it to `out` when given, and reports its
/// hash. Without `out` the instance itself is printed.
pub fn gen(profile: &GenProfile, out: Option<&Path>) -> Outcome {
    let base = GenProfile {
        mutation: None,
        ..profile.clone()
    };
    let inst = match generate_reseeding(&base, GEN_ATTEMPTS) {
        Ok(i) => i,
        Err(e) => return Outcome::input_error(e),
    };
    let (inst, mutation) = match profile.mutation {
        None => (inst, Value::Null),
        Some(m) => match mutate(&inst, m, profile.seed) {
            Ok(mt) => {
                let record = json!({ "mutation": m.name(), "target": to_value(&mt.target), "at": mt.at, "edits": to_value(&mt.edits) });
                (mt.instance, record)
            }
            Err(e) => return Outcome::input_error(e),
        },
    };
    let file = InstanceFile::from_instance(&inst);
    let hash = file.hash();
    let mut output = json!({ "hash": hash, "mutation": mutation });
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, file.canonical() + "\n") {
                return Outcome::input_error(format!("{}: {e}", path.display()));
            }
            output["path"] = Value::from(path.display().to_string());
        }
        None => output["instance"] = to_value(&file),
    }
    Outcome::new(EXIT_OK, output, Some(hash))
}
