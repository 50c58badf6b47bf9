//! The check manifest and its runner.
//!
//! One check per line, fields separated by `|`:
//!
//! ```text
//! id | anchor | basis | command | expectation
//! ```
//!
//! `basis` is `published`, `trivial` or `oracle`. The command is a
//! whitespace-separated argument list for this binary. The expectation is a
//! `;`-separated list of assertions: `exit=N` or `json.PATH OP RHS` with `OP`
//! one of `=`, `!=`, `<=`, `>=` and `RHS` either `json.PATH`, `golden:KEY`
//! (from the goldens fixture), `file:NAME` (a fixture's full text) or a JSON
//! literal. Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use globset::Glob;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{run_command, CliError, Reply, VerifyArgs, EXIT_FAIL, EXIT_OK};

pub const DEFAULT_MANIFEST: &str = include_str!("../manifest/checks.txt");
pub const GOLDENS: &str = include_str!("../fixtures/goldens.txt");

const FIXTURES: &[(&str, &str)] = &[
    ("f5.h3", include_str!("../fixtures/f5.h3")),
    ("f5_blow_3_2.h3", include_str!("../fixtures/f5_blow_3_2.h3")),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Published,
    Trivial,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Op {
    Eq,
    Ne,
    Le,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Rhs {
    Json(String),
    Golden(String),
    File(String),
    Literal(Value),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Assertion {
    Exit(i32),
    Json { path: String, op: Op, rhs: Rhs },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub basis: Basis,
    pub command: Vec<String>,
    pub expectation: String,
    #[serde(skip)]
    pub assertions: Vec<Assertion>,
}

fn parse_assertion(s: &str) -> Result<Assertion, String> {
    let s = s.trim();
    if let Some(code) = s.strip_prefix("exit=") {
        return code
            .trim()
            .parse()
            .map(Assertion::Exit)
            .map_err(|_| format!("bad exit code in '{s}'"));
    }
    let body = s
        .strip_prefix("json.")
        .ok_or_else(|| format!("assertion must start with exit= or json.: '{s}'"))?;
    let (pos, op, len) = [("!=", Op::Ne), ("<=", Op::Le), (">=", Op::Ge), ("=", Op::Eq)]
        .into_iter()
        .filter_map(|(tok, op)| body.find(tok).map(|p| (p, op, tok.len())))
        .min_by_key(|(p, _, _)| *p)
        .ok_or_else(|| format!("no comparison in '{s}'"))?;
    let path = body[..pos].trim().to_string();
    let raw = body[pos + len..].trim();
    let rhs = if let Some(p) = raw.strip_prefix("json.") {
        Rhs::Json(p.to_string())
    } else if let Some(k) = raw.strip_prefix("golden:") {
        Rhs::Golden(k.to_string())
    } else if let Some(f) = raw.strip_prefix("file:") {
        Rhs::File(f.to_string())
    } else {
        Rhs::Literal(serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string())))
    };
    Ok(Assertion::Json { path, op, rhs })
}

pub fn parse_manifest(text: &str) -> Result<Vec<Check>, String> {
    let mut checks = Vec::new();
    let mut ids = std::collections::HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        let [id, anchor, basis, command, expectation] = fields[..] else {
            return Err(format!(
                "line {}: expected 5 '|'-separated fields, got {}",
                i + 1,
                fields.len()
            ));
        };
        let basis = match basis {
            "published" => Basis::Published,
            "trivial" => Basis::Trivial,
            "oracle" => Basis::Oracle,
            other => return Err(format!("line {}: unknown basis '{other}'", i + 1)),
        };
        if id.is_empty() || !ids.insert(id.to_string()) {
            return Err(format!("line {}: empty or duplicate id '{id}'", i + 1));
        }
        let assertions = expectation
            .split(';')
            .filter(|a| !a.trim().is_empty())
            .map(parse_assertion)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        if assertions.is_empty() {
            return Err(format!("line {}: no expectation", i + 1));
        }
        checks.push(Check {
            id: id.to_string(),
            anchor: anchor.to_string(),
            basis,
            command: command.split_whitespace().map(String::from).collect(),
            expectation: expectation.to_string(),
            assertions,
        });
    }
    Ok(checks)
}

/// `key = value  # oracle: ...` lines; values are JSON literals.
pub fn parse_goldens(text: &str) -> Result<BTreeMap<String, Value>, String> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("goldens line {}: expected key = value", i + 1))?;
        let v: Value = serde_json::from_str(v.trim()).map_err(|e| format!("goldens line {}: {e}", i + 1))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |cur, seg| match cur {
        Value::Array(a) => seg.parse::<usize>().ok().and_then(|i| a.get(i)),
        _ => cur.get(seg),
    })
}

fn compare(op: &Op, left: &Value, right: &Value) -> bool {
    match op {
        Op::Eq => left == right,
        Op::Ne => left != right,
        Op::Le | Op::Ge => match (left.as_f64(), right.as_f64()) {
            (Some(l), Some(r)) => {
                if *op == Op::Le {
                    l <= r
                } else {
                    l >= r
                }
            }
            _ => false,
        },
    }
}

/// Context for resolving `golden:` and `file:` references.
pub struct Resolver {
    goldens: BTreeMap<String, Value>,
    base: Option<PathBuf>,
}

impl Resolver {
    pub fn new(base: Option<PathBuf>) -> Result<Self, String> {
        Ok(Resolver {
            goldens: parse_goldens(GOLDENS)?,
            base,
        })
    }

    fn file(&self, name: &str) -> Option<String> {
        if let Some((_, text)) = FIXTURES.iter().find(|(n, _)| *n == name) {
            return Some(text.to_string());
        }
        let base = self.base.as_deref().unwrap_or(Path::new("."));
        fs::read_to_string(base.join(name)).ok()
    }

    fn rhs(&self, rhs: &Rhs, json: &Value) -> Result<Value, String> {
        match rhs {
            Rhs::Json(p) => lookup(json, p).cloned().ok_or_else(|| format!("json.{p} missing")),
            Rhs::Golden(k) => self
                .goldens
                .get(k)
                .cloned()
                .ok_or_else(|| format!("unknown golden '{k}'")),
            Rhs::File(f) => self
                .file(f)
                .map(Value::String)
                .ok_or_else(|| format!("missing fixture '{f}'")),
            Rhs::Literal(v) => Ok(v.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub anchor: String,
    pub basis: Basis,
    pub command: String,
    pub expectation: String,
    pub passed: bool,
    pub exit: i32,
    pub failures: Vec<String>,
    pub error: Option<String>,
    /// Inline witness (embedding map or H3) when the check failed.
    pub witness: Option<String>,
    pub witness_path: Option<String>,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}

fn run_one(check: &Check, resolver: &Resolver, witness_dir: Option<&Path>) -> CheckResult {
    let start = Instant::now();
    let outcome = if check.command.first().map(String::as_str) == Some("verify") {
        None
    } else {
        Some(run_command(&check.command))
    };
    let mut failures = Vec::new();
    let (exit, json, error) = match outcome {
        Some(o) => (o.exit, o.json.unwrap_or(Value::Null), o.error),
        None => (
            crate::EXIT_USAGE,
            Value::Null,
            Some("nested verify is not allowed".to_string()),
        ),
    };
    for a in &check.assertions {
        match a {
            Assertion::Exit(code) => {
                if exit != *code {
                    failures.push(format!("exit: expected {code}, got {exit}"));
                }
            }
            Assertion::Json { path, op, rhs } => {
                let left = lookup(&json, path);
                let right = resolver.rhs(rhs, &json);
                match (left, right) {
                    (None, _) => failures.push(format!("json.{path} missing")),
                    (_, Err(e)) => failures.push(e),
                    (Some(l), Ok(r)) => {
                        if !compare(op, l, &r) {
                            failures.push(format!("json.{path} {op:?} {r}: got {l}"));
                        }
                    }
                }
            }
        }
    }
    let passed = failures.is_empty() && (error.is_none() || check_expects_error(check));
    let witness_text = match json.get("witness") {
        Some(Value::String(w)) => Some(w.clone()),
        _ => None,
    };
    let witness_path = match (witness_dir, &witness_text) {
        (Some(dir), Some(w)) => {
            let path = dir.join(format!("{}.txt", check.id.replace(['/', '=', ','], "_")));
            fs::write(&path, w).ok().map(|_| path.display().to_string())
        }
        _ => None,
    };
    CheckResult {
        id: check.id.clone(),
        anchor: check.anchor.clone(),
        basis: check.basis,
        command: check.command.join(" "),
        expectation: check.expectation.clone(),
        passed,
        exit,
        failures,
        error,
        witness: if passed { None } else { witness_text },
        witness_path,
        millis: start.elapsed().as_millis() as u64,
    }
}

/// A check whose command is expected to fail (e.g. `exit=3`) still passes.
fn check_expects_error(check: &Check) -> bool {
    check
        .assertions
        .iter()
        .any(|a| matches!(a, Assertion::Exit(c) if *c != EXIT_OK))
}

pub struct RunOptions<'a> {
    pub filter: Option<&'a str>,
    pub jobs: Option<usize>,
    pub witness_dir: Option<&'a Path>,
    pub base: Option<PathBuf>,
}

pub fn run_checks(checks: &[Check], opts: &RunOptions) -> Result<Report, String> {
    let matcher = match opts.filter {
        Some(f) => Some(Glob::new(f).map_err(|e| format!("bad filter: {e}"))?.compile_matcher()),
        None => None,
    };
    let selected: Vec<&Check> = checks
        .iter()
        .filter(|c| matcher.as_ref().is_none_or(|m| m.is_match(&c.id)))
        .collect();
    let resolver = Resolver::new(opts.base.clone())?;
    let work = || -> Vec<CheckResult> {
        selected
            .par_iter()
            .map(|c| run_one(c, &resolver, opts.witness_dir))
            .collect()
    };
    let results = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| e.to_string())?
            .install(work),
        None => work(),
    };
    let passed = results.iter().filter(|r| r.passed).count();
    Ok(Report {
        total: results.len(),
        passed,
        failed: results.len() - passed,
        checks: results,
    })
}

/// Drops every `millis` field, leaving what must be reproducible.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("millis");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

pub(crate) fn command(a: &VerifyArgs) -> Result<Reply, CliError> {
    let (text, base) = match &a.manifest {
        Some(p) => (
            fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?,
            p.parent().map(Path::to_path_buf),
        ),
        None => (DEFAULT_MANIFEST.to_string(), None),
    };
    let checks = parse_manifest(&text).map_err(CliError::Usage)?;
    if let Some(dir) = &a.witness_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    let report = run_checks(
        &checks,
        &RunOptions {
            filter: a.filter.as_deref(),
            jobs: a.jobs,
            witness_dir: a.witness_dir.as_deref(),
            base,
        },
    )
    .map_err(CliError::Usage)?;
    let json = serde_json::to_value(&report).expect("report serializes");
    if let Some(path) = &a.report {
        let body = serde_json::to_string_pretty(&json).expect("report serializes");
        fs::write(path, body).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut out = String::new();
    for r in &report.checks {
        let _ = writeln!(
            out,
            "{} {:<48} {:>7} ms",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.millis
        );
        for f in &r.failures {
            let _ = writeln!(out, "     {f}");
        }
        if let Some(e) = &r.error {
            let _ = writeln!(out, "     error: {e}");
        }
        if let Some(w) = &r.witness {
            for line in w.lines() {
                let _ = writeln!(out, "     | {line}");
            }
        }
    }
    let _ = writeln!(
        out,
        "{} checks, {} passed, {} failed",
        report.total, report.passed, report.failed
    );
    Ok(Reply {
        json: json!(report),
        text: out,
        exit: if report.failed == 0 { EXIT_OK } else { EXIT_FAIL },
    })
}
