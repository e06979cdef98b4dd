use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::Cli;

pub const SCHEMA: &str = "thinlab.report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Exit codes. Usage errors from argument parsing exit with 2 as well.
pub mod exit {
    pub const OK: u8 = 0;
    pub const PARSE: u8 = 2;
    pub const FILE: u8 = 3;
    pub const BUDGET: u8 = 4;
    pub const CONTRACT: u8 = 5;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The report lists at least one failed check.
    CheckFailed,
    /// Some cells were beyond the search budget and hold bounds only.
    BudgetExceeded,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => exit::OK,
            Status::CheckFailed => exit::CONTRACT,
            Status::BudgetExceeded => exit::BUDGET,
        }
    }

    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Ok
        } else {
            Status::CheckFailed
        }
    }
}

pub struct Outcome {
    pub command: &'static str,
    pub body: Value,
    pub status: Status,
}

impl Outcome {
    pub fn new(
        command: &'static str,
        body: impl Serialize,
        status: Status,
    ) -> Result<Self, CliError> {
        let body = serde_json::to_value(body).map_err(|e| CliError::Contract(e.to_string()))?;
        Ok(Outcome {
            command,
            body,
            status,
        })
    }
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    File { path: PathBuf, message: String },
    Budget(String),
    Contract(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::File { .. } => exit::FILE,
            CliError::Budget(_) => exit::BUDGET,
            CliError::Contract(_) => exit::CONTRACT,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::File { .. } => "file",
            CliError::Budget(_) => "budget",
            CliError::Contract(_) => "contract",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse(m) | CliError::Budget(m) | CliError::Contract(m) => m.clone(),
            CliError::File { path, message } => format!("{}: {message}", path.display()),
        }
    }

    pub fn file(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::File {
            path: path.to_path_buf(),
            message: err.to_string(),
        }
    }
}

impl From<thinlab::Error> for CliError {
    fn from(err: thinlab::Error) -> Self {
        match err {
            thinlab::Error::BudgetExceeded { .. } => CliError::Budget(err.to_string()),
            thinlab::Error::InvalidWord(_) => CliError::Parse(err.to_string()),
            other => CliError::Contract(other.to_string()),
        }
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("command".into(), json!(command));
    match body {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    Value::Object(map)
}

fn render(format: Format, value: &Value) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            text(&mut s, value, 0);
            s
        }
    }
}

/// Indented `key: value` lines; arrays of scalars stay on one line.
fn text(out: &mut String, value: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if is_inline(v) {
                    let _ = writeln!(out, "{pad}{k}: {}", scalar(v));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    text(out, v, indent + 1);
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                if is_inline(v) {
                    let _ = writeln!(out, "{pad}- {}", scalar(v));
                } else {
                    let _ = writeln!(out, "{pad}- [{i}]");
                    text(out, v, indent + 1);
                }
            }
        }
        v => {
            let _ = writeln!(out, "{pad}{}", scalar(v));
        }
    }
}

fn is_inline(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

pub fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), CliError> {
    let rendered = render(cli.format, &envelope(outcome.command, outcome.body.clone()));
    match &cli.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| CliError::file(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.as_bytes())
                .map_err(|e| CliError::file(Path::new("<stdout>"), e))
        }
    }
}

/// Errors go to stderr in the chosen format.
pub fn emit_error(cli: &Cli, err: &CliError) {
    let value = json!({
        "schema": SCHEMA,
        "error": { "kind": err.kind(), "exit_code": err.code(), "message": err.message() },
    });
    let _ = std::io::stderr().write_all(render(cli.format, &value).as_bytes());
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Contract(e.to_string()))?;
    s.push('\n');
    std::fs::write(path, s).map_err(|e| CliError::file(path, e))
}
