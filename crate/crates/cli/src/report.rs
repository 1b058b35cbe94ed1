//! Deterministic JSON emission: sorted keys, floats with 17 significant digits.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// A finite float as a JSON number; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn write_scalar(out: &mut String, v: &Value) {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}").unwrap();
            } else {
                write!(out, "{:.16e}", n.as_f64().unwrap_or(f64::NAN)).unwrap();
            }
        }
        other => out.push_str(&other.to_string()),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| match i {
            Value::Array(inner) => inner.iter().all(|x| !x.is_array() && !x.is_object()),
            Value::Object(_) => false,
            _ => true,
        }),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn write_compact(out: &mut String, v: &Value) {
    match v {
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_compact(out, x);
            }
            out.push(']');
        }
        Value::Object(m) => {
            out.push('{');
            for (i, (k, x)) in sorted(m).into_iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_compact(out, x);
            }
            out.push('}');
        }
        _ => write_scalar(out, v),
    }
}

fn sorted(m: &Map<String, Value>) -> Vec<(&String, &Value)> {
    let mut entries: Vec<_> = m.iter().collect();
    entries.sort_by(|a, b| a.0.cmp(b.0));
    entries
}

fn write_pretty(out: &mut String, v: &Value, indent: usize) {
    if is_flat(v) {
        write_compact(out, v);
        return;
    }
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                write_pretty(out, x, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(m) => {
            out.push_str("{\n");
            let entries = sorted(m);
            let n = entries.len();
            for (i, (k, x)) in entries.into_iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_pretty(out, x, indent + 1);
                out.push_str(if i + 1 < n { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        _ => write_scalar(out, v),
    }
}

/// Canonical single-line form, used for digests.
pub fn canonical(v: &Value) -> String {
    let mut out = String::new();
    write_compact(&mut out, v);
    out
}

/// Indented canonical form, used for output.
pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    write_pretty(&mut out, v, 0);
    out.push('\n');
    out
}

/// Hex SHA-256 of the canonical form.
pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(canonical(v).as_bytes()))
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    /// Input label to document digest.
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            inputs: BTreeMap::new(),
            results: Value::Object(Map::new()),
            tolerances: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert(
            "inputs".into(),
            Value::Object(self.inputs.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect()),
        );
        m.insert("results".into(), self.results.clone());
        m.insert(
            "tolerances".into(),
            Value::Object(self.tolerances.iter().map(|(k, &v)| (k.clone(), num(v))).collect()),
        );
        if let Some(seed) = self.seed {
            m.insert("seed".into(), Value::from(seed));
        }
        Value::Object(m)
    }

    pub fn render(&self) -> String {
        pretty(&self.to_value())
    }
}
