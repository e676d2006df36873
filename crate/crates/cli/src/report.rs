//! Report assembly and emission. The payload is deterministic for a fixed
//! config and seed (exact modes are bit-identical; Monte Carlo modes are
//! identical for a fixed seed regardless of worker count, because sampling is
//! chunk-seeded). Wall clock lives outside the payload.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub payload: Value,
    pub checks: Vec<CheckLine>,
    pub wall_clock_ms: u128,
}

impl Report {
    pub fn new(command: &str, params: BTreeMap<String, String>, payload: Value) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            params,
            payload,
            checks: Vec::new(),
            wall_clock_ms: 0,
        }
    }

    pub fn with_checks(mut self, checks: Vec<CheckLine>) -> Self {
        self.checks = checks;
        self
    }

    pub fn emit(&self, format: Format, output: Option<&Path>) -> std::io::Result<()> {
        let text = match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        };
        match output {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().write_all(text.as_bytes()),
        }
    }

    /// CSV rendering: an array-of-flat-objects payload (or an object with a
    /// single array field) becomes header + rows; anything else becomes
    /// key,value lines.
    fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.params {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        let rows = match &self.payload {
            Value::Array(items) => Some(items.clone()),
            Value::Object(map) => {
                let arrays: Vec<&Vec<Value>> = map
                    .values()
                    .filter_map(|v| match v {
                        Value::Array(items) if !items.is_empty() => Some(items),
                        _ => None,
                    })
                    .collect();
                if arrays.len() == 1 && arrays[0].iter().all(|v| v.is_object()) {
                    Some(arrays[0].clone())
                } else {
                    None
                }
            }
            _ => None,
        };
        match rows {
            Some(items) if items.iter().all(|v| v.is_object()) => {
                let mut keys: Vec<String> = Vec::new();
                for item in &items {
                    for k in item.as_object().unwrap().keys() {
                        if !keys.contains(k) {
                            keys.push(k.clone());
                        }
                    }
                }
                out.push_str(&keys.join(","));
                out.push('\n');
                for item in &items {
                    let obj = item.as_object().unwrap();
                    let cells: Vec<String> = keys
                        .iter()
                        .map(|k| obj.get(k).map(csv_cell).unwrap_or_default())
                        .collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            _ => {
                out.push_str("key,value\n");
                flatten_into(&mut out, "", &self.payload);
            }
        }
        out
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => {
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        other => other.to_string(),
    }
}

fn flatten_into(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_into(out, &key, inner);
            }
        }
        Value::Array(items) => {
            for (i, inner) in items.iter().enumerate() {
                flatten_into(out, &format!("{prefix}[{i}]"), inner);
            }
        }
        leaf => {
            out.push_str(&format!("{prefix},{}\n", csv_cell(leaf)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_of_row_payload() {
        let report = Report::new(
            "demo",
            BTreeMap::from([("n".to_string(), "3".to_string())]),
            json!({"rows": [{"d": 1, "lhs": 0.5}, {"d": 2, "lhs": 0.25}]}),
        );
        let csv = report.to_csv();
        assert!(csv.contains("# n = 3"));
        assert!(csv.contains("d,lhs"));
        assert!(csv.contains("2,0.25"));
    }

    #[test]
    fn csv_of_scalar_payload() {
        let report = Report::new("demo", BTreeMap::new(), json!({"mu": 0.4375, "exact": "7/16"}));
        let csv = report.to_csv();
        assert!(csv.contains("mu,0.4375"));
        assert!(csv.contains("exact,7/16"));
    }
}
