//! Batch front-end: problem files in, CSV tables and JSON summaries out.

pub mod commands;
pub mod fixtures;
pub mod problem;
pub mod report;
pub mod selftest;

use std::fmt;

use serde_json::Value;

pub use commands::{run, Command, Options};
pub use problem::{Problem, ProblemFile};
pub use report::Report;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Malformed or inconsistent problem file.
    Schema(String),
    /// The model has no feasible point or violates a precondition.
    Infeasible(String),
    /// A computed quantity broke an invariant.
    Tolerance(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Io(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Tolerance(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible model: {m}"),
            CliError::Tolerance(m) => write!(f, "tolerance breach: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<intconj::Error> for CliError {
    fn from(e: intconj::Error) -> Self {
        match e {
            intconj::Error::Infeasible { .. } | intconj::Error::Precondition(_) => CliError::Infeasible(e.to_string()),
            _ => CliError::Schema(e.to_string()),
        }
    }
}

/// Runs every expectation of `p`, returning `(checks run, failure messages)`.
pub fn check_expectations(p: &Problem) -> (usize, Vec<String>) {
    let mut checks = 0;
    let mut failures = Vec::new();
    for (i, e) in p.expect.iter().enumerate() {
        let outcome = e
            .command
            .parse::<Command>()
            .and_then(|cmd| {
                let args: serde_json::Map<String, Value> = e.args.clone().into_iter().collect();
                let o = Options::default().with_args(&args)?;
                run(cmd, p, &o)
            });
        let tol = e.tol.unwrap_or(1e-9);
        match outcome {
            Err(err) => {
                checks += 1;
                // An expected error is spelled as the check `error`.
                let want = e.checks.get("error").and_then(Value::as_str);
                let got = match err {
                    CliError::Schema(_) | CliError::Io(_) => "schema",
                    CliError::Infeasible(_) => "infeasible",
                    CliError::Tolerance(_) => "tolerance",
                };
                if want != Some(got) {
                    failures.push(format!("expectation {i} ({}): {err}", e.command));
                }
            }
            Ok(rep) => {
                for (key, want) in &e.checks {
                    checks += 1;
                    if let Some(msg) = report::check_entry(&rep.summary, key, want, tol) {
                        failures.push(format!("expectation {i} ({}): {msg}", e.command));
                    }
                }
            }
        }
    }
    (checks, failures)
}
