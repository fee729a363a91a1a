//! Report envelope and rendering.

use std::path::Path;

use bflab_core::io::write_text;
use bflab_core::Result;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// `{command, version, config, result}`.
pub fn envelope(command: &str, cfg: &RunConfig, result: Value) -> Value {
    json!({
        "command": command,
        "version": bflab_core::VERSION,
        "config": cfg,
        "result": result,
    })
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_rows(rows: &[Value]) -> String {
    let mut header: Vec<String> = Vec::new();
    for r in rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory csv");
    for r in rows {
        let rec: Vec<String> = header.iter().map(|k| r.get(k).map(cell).unwrap_or_default()).collect();
        w.write_record(&rec).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

fn csv_fields(m: &Map<String, Value>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory csv");
    for (k, v) in m {
        w.write_record([k.as_str(), &cell(v)]).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

/// Tables (`rows`) become one CSV record per row; anything else becomes
/// `key,value` pairs of the result object.
pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("json") + "\n",
        Format::Csv => {
            let result = &report["result"];
            match result.get("rows") {
                Some(Value::Array(rows)) => csv_rows(rows),
                _ => match result {
                    Value::Object(m) => csv_fields(m),
                    other => csv_fields(&Map::from_iter([("value".to_string(), other.clone())])),
                },
            }
        }
    }
}

pub fn emit(report: &Value, cfg: &RunConfig, out: Option<&Path>) -> Result<()> {
    let text = render(report, cfg.format);
    match out {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
