//! Command-line front end for `hyperturan` and the `verify` harness.
//!
//! Every subcommand produces a JSON value and a plain-text rendering;
//! `--json` selects which one is printed. Exit codes: 0 ok, 1 failed check
//! or containment, 2 usage error, 3 bound exceeded.

mod commands;
pub mod exprs;
#[cfg(test)]
mod goldens;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(hyperturan::Error),
}

impl From<hyperturan::Error> for CliError {
    fn from(e: hyperturan::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(hyperturan::Error::BoundExceeded { .. } | hyperturan::Error::Inconclusive { .. }) => {
                EXIT_BOUND
            }
            CliError::Core(_) => EXIT_USAGE,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

/// Result of one command invocation, before anything is printed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit: i32,
    /// Machine-readable result; `None` when the command failed before producing one.
    pub json: Option<Value>,
    pub text: String,
    pub error: Option<String>,
    /// Whether `--json` was requested.
    pub json_output: bool,
}

impl Outcome {
    /// What the binary writes to stdout.
    pub fn stdout(&self) -> String {
        match (&self.json, self.json_output) {
            (Some(v), true) => format!("{}\n", serde_json::to_string_pretty(v).expect("json values serialize")),
            _ => self.text.clone(),
        }
    }
}

pub(crate) struct Reply {
    pub json: Value,
    pub text: String,
    pub exit: i32,
}

#[derive(Parser, Debug)]
#[command(
    name = "hyperturan",
    version,
    about = "Turán problems for 3-uniform hypergraphs at desk scale"
)]
pub struct Cli {
    /// Print the JSON report instead of text
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a construction (turan, turan-plus, g, fsim-extremal, ktss-free) or `pattern <spec>`
    Construct(ConstructArgs),
    /// Evaluate a closed-form count or bound report
    Formula(FormulaArgs),
    /// Exit 0 if the host avoids the pattern, 1 with a witness map otherwise
    Free(ContainArgs),
    /// Find, count, or pack disjoint embeddings
    Embed(EmbedArgs),
    /// Exact ex_3(n, P)
    Ex(ExArgs),
    /// Exact bipartite variant with forbidden K_{t,s,s}
    Exbip(ExbipArgs),
    /// Maximum packing with every pair in at most t-1 triples
    Design(DesignArgs),
    /// Non-edges whose addition keeps the host pattern-free
    Saturate(ContainArgs),
    /// Tripartition local search and stability quantities
    Stability(StabilityArgs),
    /// Replay the check manifest
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub kind: String,
    /// Pattern expression when kind is `pattern`
    pub spec: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Fill parts greedily when they exceed the exact-solver bound
    #[arg(long)]
    pub greedy: bool,
    /// Print the vertex-numbering convention of a pattern
    #[arg(long)]
    pub describe: bool,
}

#[derive(Args, Debug)]
pub struct FormulaArgs {
    /// e-turan, f-sim, f-sim-scan, g-count, turan-plus-count, f5sk-bounds
    pub name: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Upper end of n - t for f-sim-scan
    #[arg(long, default_value_t = 200)]
    pub max: usize,
}

#[derive(Args, Debug)]
pub struct ContainArgs {
    /// H3 file or @construction expression
    pub host: String,
    #[arg(long)]
    pub pattern: String,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    pub host: String,
    #[arg(long)]
    pub pattern: String,
    /// Count embeddings (maps, not copies)
    #[arg(long)]
    pub count: bool,
    /// Stop counting at this many
    #[arg(long, default_value_t = u64::MAX)]
    pub cap: u64,
    /// Look for this many vertex-disjoint copies
    #[arg(long)]
    pub disjoint: Option<usize>,
    #[arg(long, default_value_t = hyperturan::embed::DEFAULT_COPY_CAP)]
    pub copy_cap: usize,
}

#[derive(Args, Debug)]
pub struct ExArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub pattern: String,
    /// Also count isomorphism classes of extremal graphs
    #[arg(long)]
    pub enumerate: bool,
}

#[derive(Args, Debug)]
pub struct ExbipArgs {
    #[arg(long)]
    pub ma: usize,
    #[arg(long)]
    pub nb: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub s: usize,
}

#[derive(Args, Debug)]
pub struct DesignArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub enumerate: bool,
}

#[derive(Args, Debug)]
pub struct StabilityArgs {
    pub host: String,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// delta = 1/(10t)
    #[arg(long, conflicts_with_all = ["delta", "preset_m"])]
    pub preset_t: Option<usize>,
    /// delta = 1/(100m)
    #[arg(long, conflicts_with = "delta")]
    pub preset_m: Option<usize>,
    /// eps = delta^3
    #[arg(long, conflicts_with = "eps")]
    pub coupled: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Manifest file; the built-in manifest when omitted
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Glob over check ids, e.g. `fsim/*`
    #[arg(long)]
    pub filter: Option<String>,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Also write the JSON report here
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write witnesses of checks into this directory
    #[arg(long)]
    pub witness_dir: Option<PathBuf>,
}

/// Parses and runs one command line (without the program name).
pub fn run_command<S: AsRef<str>>(args: &[S]) -> Outcome {
    let argv = std::iter::once("hyperturan").chain(args.iter().map(|s| s.as_ref()));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let exit = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Outcome {
                exit,
                json: None,
                text: if exit == EXIT_OK { e.to_string() } else { String::new() },
                error: (exit != EXIT_OK).then(|| e.to_string()),
                json_output: false,
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Outcome {
    match commands::dispatch(&cli.command) {
        Ok(r) => Outcome {
            exit: r.exit,
            json: Some(r.json),
            text: r.text,
            error: None,
            json_output: cli.json,
        },
        Err(e) => Outcome {
            exit: e.exit_code(),
            json: None,
            text: String::new(),
            error: Some(e.message()),
            json_output: cli.json,
        },
    }
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;

    fn run(args: &[&str]) -> Outcome {
        run_command(args)
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["free", "@turan:9", "--pattern", "f5"]).exit, EXIT_OK);
        let hit = run(&["free", "@complete:6", "--pattern", "f5"]);
        assert_eq!(hit.exit, EXIT_FAIL);
        assert!(hit.text.contains("->"), "{}", hit.text);
        assert_eq!(run(&["free", "@turan:9"]).exit, EXIT_USAGE);
        assert_eq!(run(&["nonsense"]).exit, EXIT_USAGE);
        assert_eq!(run(&["free", "@turan:9", "--pattern", "f5-blow:7,2"]).exit, EXIT_USAGE);
        assert_eq!(run(&["ex", "--n", "11", "--pattern", "f5"]).exit, EXIT_BOUND);
        assert_eq!(
            run(&["exbip", "--ma", "7", "--nb", "4", "--t", "1", "--s", "1"]).exit,
            EXIT_BOUND
        );
        assert_eq!(run(&["--help"]).exit, EXIT_OK);
    }

    #[test]
    fn h3_files_as_hosts_and_patterns() {
        let mut host = tempfile::NamedTempFile::new().unwrap();
        write!(host, "{}", hyperturan::constructs::turan_partite(6, 3).unwrap().to_h3()).unwrap();
        let mut pat = tempfile::NamedTempFile::new().unwrap();
        write!(pat, "4 2\n0 1 2\n0 1 3\n").unwrap();
        let host = host.path().to_str().unwrap();
        let pat = pat.path().to_str().unwrap();

        let out = run(&["--json", "embed", host, "--pattern", pat, "--count"]);
        assert_eq!(out.exit, EXIT_OK);
        // two triples sharing a pair in T3(6,3): 12 pairs across parts, 2 apexes each, ordered
        assert_eq!(out.json.unwrap()["count"], 48);
        assert_eq!(run(&["free", host, "--pattern", "f5"]).exit, EXIT_OK);
    }

    #[test]
    fn json_flag_switches_stdout() {
        let text = run(&["formula", "e-turan", "--n", "9", "--k", "3"]);
        let json = run(&["--json", "formula", "e-turan", "--n", "9", "--k", "3"]);
        assert_eq!(text.json, json.json);
        let parsed: Value = serde_json::from_str(&json.stdout()).unwrap();
        assert_eq!(Some(parsed), json.json);
        assert_ne!(text.stdout(), json.stdout());
    }

    #[test]
    fn construct_reports_formula_counts() {
        let out = run(&["--json", "construct", "turan-plus", "--n", "12", "--t", "2"]);
        let j = out.json.unwrap();
        assert_eq!(j["edges"], j["formula_edges"]);
        let h = hyperturan::Hypergraph3::from_h3(j["h3"].as_str().unwrap()).unwrap();
        assert_eq!(Some(h.edge_count() as u64), j["edges"].as_u64());
    }
}
