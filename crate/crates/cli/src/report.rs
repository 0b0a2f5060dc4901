use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One line of a per-prime scan.
#[derive(Clone, Debug)]
pub struct Row {
    pub p: u64,
    pub status: String,
    pub m: Option<u64>,
    pub k: Option<u32>,
}

/// Result of a subcommand before it is wrapped in the envelope.
#[derive(Clone, Debug)]
pub struct Report {
    pub result: Value,
    pub rows: Vec<Row>,
    /// False when a requested check failed; maps to exit code 1.
    pub ok: bool,
}

impl Report {
    pub fn new(result: Value) -> Self {
        Report {
            result,
            rows: Vec::new(),
            ok: true,
        }
    }

    pub fn check(result: Value, ok: bool) -> Self {
        Report {
            result,
            rows: Vec::new(),
            ok,
        }
    }

    pub fn with_rows(mut self, rows: Vec<Row>) -> Self {
        self.rows = rows;
        self
    }
}

/// Serialises the envelope. serde_json maps are ordered, so keys come out sorted.
pub fn emit(report: &Report, format: Format, command: &str, wall_ms: Option<u128>) -> String {
    match format {
        Format::Json => {
            let mut env = Map::new();
            env.insert("tool".into(), json!("adelab"));
            env.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            env.insert("command".into(), json!(command));
            env.insert("ok".into(), json!(report.ok));
            env.insert("result".into(), report.result.clone());
            if let Some(ms) = wall_ms {
                env.insert("wall_ms".into(), json!(ms as u64));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(env)).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            if report.rows.is_empty() {
                s.push_str("key,value\n");
                for (k, v) in flatten(&report.result) {
                    let _ = writeln!(s, "{},{}", csv_field(&k), csv_field(&v));
                }
            } else {
                s.push_str("p,status,m,k\n");
                for r in &report.rows {
                    let _ = writeln!(s, "{},{},{},{}", r.p, r.status, opt(r.m), opt(r.k));
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            if !report.rows.is_empty() {
                let _ = writeln!(s, "{:>7}  {:<14} {:>7} {:>3}", "p", "status", "m", "k");
                for r in &report.rows {
                    let _ = writeln!(s, "{:>7}  {:<14} {:>7} {:>3}", r.p, r.status, opt(r.m), opt(r.k));
                }
                s.push('\n');
            }
            let flat = flatten(&report.result);
            let width = flat.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in flat {
                if !report.rows.is_empty() && k.starts_with("entries.") {
                    continue;
                }
                let _ = writeln!(s, "{k:<width$}  {v}");
            }
            if !report.ok {
                s.push_str("check failed\n");
            }
            s
        }
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Dotted-path view of a JSON value; arrays of scalars stay on one line.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                walk(x, join(k), out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push((path, format!("[{}]", items.join(" "))));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                walk(x, join(&i.to_string()), out);
            }
        }
        _ => out.push((path, scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}
