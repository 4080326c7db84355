//! Reports: the command payload wrapped with the tool version and the digest
//! of the input, written as canonical JSON.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub tool_version: String,
    pub input_digest: String,
    pub payload: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, input_digest: impl Into<String>, payload: Value) -> Self {
        Report {
            command: command.into(),
            tool_version: TOOL_VERSION.to_string(),
            input_digest: input_digest.into(),
            payload,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "command": self.command,
            "tool_version": self.tool_version,
            "input_digest": self.input_digest,
            "payload": self.payload,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self, CliError> {
        let obj = value.as_object().ok_or_else(|| CliError::schema("", "report must be a JSON object"))?;
        let text = |key: &str| -> Result<String, CliError> {
            obj.get(key)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| CliError::schema(format!("/{key}"), "expected a string"))
        };
        Ok(Report {
            command: text("command")?,
            tool_version: text("tool_version")?,
            input_digest: text("input_digest")?,
            payload: obj.get("payload").cloned().ok_or_else(|| CliError::schema("/payload", "missing"))?,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Json { line: e.line(), column: e.column(), message: e.to_string() })?;
        Report::from_json(&value)
    }

    /// Pretty-printed JSON with keys sorted at every level and a final
    /// newline.
    pub fn emit(&self) -> String {
        let mut out = serde_json::to_string_pretty(&canonical(&self.to_json())).expect("JSON values serialize");
        out.push('\n');
        out
    }
}

fn canonical(value: &Value) -> Value {
    match value {
        Value::Object(obj) => {
            let mut keys: Vec<&String> = obj.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonical(&obj[k]));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(canonical).collect()),
        other => other.clone(),
    }
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(report: &Report, path: Option<&Path>) -> Result<(), CliError> {
    let text = report.emit();
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write { path: p.to_path_buf(), source }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|source| CliError::Write { path: "<stdout>".into(), source })
        }
    }
}
