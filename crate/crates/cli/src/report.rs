//! Run reports: canonical JSON, input hashing, CSV projections.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use cliquechain::classify::{Anomaly, Severity};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Significant digits for every float in JSON and CSV output.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub argv: Vec<String>,
    pub parameters: Value,
    /// SHA-256 of `blob <len>\0<canonical inputs>`, hex.
    pub input_hash: String,
    pub payload: Value,
    pub anomalies: Vec<Anomaly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn new(command: &str, argv: &[String], parameters: Value) -> Self {
        let inputs = serde_json::json!({ "command": command, "parameters": parameters });
        RunReport {
            command: command.to_string(),
            argv: argv.to_vec(),
            input_hash: content_hash(&to_canonical(&inputs, false)),
            parameters,
            payload: Value::Null,
            anomalies: Vec::new(),
            timings: None,
        }
    }

    pub fn has_mismatch(&self) -> bool {
        self.anomalies
            .iter()
            .any(|a| a.severity == Severity::Mismatch)
    }

    pub fn push(&mut self, severity: Severity, code: &str, message: impl Into<String>) {
        self.anomalies.push(Anomaly {
            severity,
            code: code.to_string(),
            message: message.into(),
        });
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut s = to_canonical(&v, true);
        s.push('\n');
        s
    }
}

/// Git-style blob hash of `text`.
pub fn content_hash(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", text.len()).as_bytes());
    h.update(text.as_bytes());
    h.finalize().iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Rounds to [`SIG_DIGITS`] significant digits and prints the shortest
/// decimal form of the result. Non-finite values become `null`.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    if x == 0.0 {
        return "0.0".to_string();
    }
    let r: f64 = format!("{:.*e}", SIG_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    let a = r.abs();
    if (1e-3..1e16).contains(&a) {
        let s = r.to_string();
        if s.contains('.') {
            s
        } else {
            s + ".0"
        }
    } else {
        format!("{r:e}")
    }
}

/// JSON with sorted keys and fixed float formatting. `pretty` indents by two
/// spaces.
pub fn to_canonical(v: &Value, pretty: bool) -> String {
    let mut out = String::new();
    write_value(v, pretty, 0, &mut out);
    out
}

fn write_value(v: &Value, pretty: bool, level: usize, out: &mut String) {
    let newline = |out: &mut String, level: usize| {
        if pretty {
            out.push('\n');
            out.push_str(&"  ".repeat(level));
        }
    };
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => out.push_str(&i.to_string()),
            (_, Some(u)) => out.push_str(&u.to_string()),
            _ => out.push_str(&fmt_float(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                newline(out, level + 1);
                write_value(item, pretty, level + 1, out);
            }
            newline(out, level);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.into_iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                newline(out, level + 1);
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push(':');
                if pretty {
                    out.push(' ');
                }
                write_value(&map[key], pretty, level + 1, out);
            }
            newline(out, level);
            out.push('}');
        }
    }
}

/// Float cell for CSV output; empty for `None`.
pub fn cell(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// Joins floats with `;` for multi-valued CSV cells.
pub fn cells(xs: &[f64]) -> String {
    xs.iter()
        .map(|&x| fmt_float(x))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn write_two_column(path: &Path, header: [&str; 2], pts: &[[f64; 2]]) -> Result<()> {
    let rows: Vec<Vec<String>> = pts
        .iter()
        .map(|[x, y]| vec![fmt_float(*x), fmt_float(*y)])
        .collect();
    std::fs::write(path, csv_string(&header, &rows)?)
        .with_context(|| format!("writing {}", path.display()))
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_float(7.035469064321234), "7.03546906432");
        assert_eq!(fmt_float(6.0), "6.0");
        assert_eq!(fmt_float(0.0), "0.0");
        assert_eq!(fmt_float(-0.2), "-0.2");
        assert_eq!(fmt_float(1.5e-20), "1.5e-20");
        assert_eq!(fmt_float(f64::NAN), "null");
    }

    #[test]
    fn canonical_sorts_keys() {
        let v = serde_json::json!({"b": 1.0, "a": [1, 2.5], "c": {}});
        assert_eq!(to_canonical(&v, false), r#"{"a":[1,2.5],"b":1.0,"c":{}}"#);
        let pretty = to_canonical(&v, true);
        assert!(pretty.starts_with("{\n  \"a\": [\n    1,"));
    }

    #[test]
    fn hash_is_git_blob_style() {
        // SHA-256 of `blob 0\0`.
        assert_eq!(
            content_hash(""),
            "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
    }
}
