//! The JSON envelope shared by every command.

use serde_json::{json, Value};

use crate::config::Knobs;

pub const SCHEMA_TAG: &str = "dunkl-report/v1";

/// `{schema, command, config, result}`. Keys come out sorted, so equal
/// inputs serialise to equal bytes.
pub fn envelope(command: &str, config: &Knobs, result: Value) -> Value {
    json!({
        "schema": SCHEMA_TAG,
        "command": command,
        "config": serde_json::to_value(config).unwrap_or(Value::Null),
        "result": result,
    })
}

pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_else(|_| "null".into());
    s.push('\n');
    s
}

/// Quotes a CSV field when it needs it.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let line = |cells: Vec<String>| cells.join(",") + "\r\n";
    out.push_str(&line(header.iter().map(|h| csv_field(h)).collect()));
    for r in rows {
        out.push_str(&line(r.iter().map(|c| csv_field(c)).collect()));
    }
    out
}
