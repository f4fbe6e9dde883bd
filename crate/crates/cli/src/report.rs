use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 9;

#[derive(Debug, Clone, Serialize)]
pub struct ReportBundle {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub provenance: Vec<String>,
    pub tool_version: String,
}

impl ReportBundle {
    pub fn new(
        command: &str,
        inputs: impl Serialize,
        results: impl Serialize,
        provenance: &[&str],
    ) -> CliResult<Self> {
        Ok(ReportBundle {
            command: command.to_string(),
            inputs: to_value(inputs)?,
            results: to_value(results)?,
            provenance: provenance.iter().map(|s| s.to_string()).collect(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }

    /// Pretty JSON with sorted keys and floats rounded to nine significant digits.
    pub fn to_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("bundle is plain data"))
    }
}

fn to_value(v: impl Serialize) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Input(format!("cannot serialize report: {e}")))
}

pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    // scientific formatting rounds half-to-even on the decimal digits, exactly once
    let s = format!("{:.*e}", digits - 1, x);
    let r: f64 = s.parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn normalize(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap(), SIGNIFICANT_DIGITS);
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.iter().map(normalize).collect()),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), normalize(&map[k]));
            }
            Value::Object(out)
        }
        other => other.clone(),
    }
}

pub fn canonical_json(v: &Value) -> String {
    serde_json::to_string_pretty(&normalize(v)).expect("values serialize")
}

/// Fixed-width float for text tables.
pub fn fmt_f(x: f64) -> String {
    format!("{:>12.9}", round_significant(x, SIGNIFICANT_DIGITS))
}
