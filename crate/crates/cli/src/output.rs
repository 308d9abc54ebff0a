//! Report documents and their JSON and CSV renderings.
//!
//! Both renderings print reals as `{:.16e}` (17 significant digits, enough
//! to round-trip every `f64`) and integers as integers. JSON objects keep
//! their keys sorted. Non-finite reals have no JSON spelling and become
//! `null`.
//!
//! The CSV is a flat projection of the payload. Every payload field holding
//! a non-empty list of objects becomes a block of rows tagged with the field
//! name in the `record` column; all other fields go into one `summary` row.
//! Nested values are flattened into dotted column names (`argmax.0`,
//! `values.levels.2`). Columns appear in order of first use.

use std::fmt::Write as _;

use serde_json::{Map, Value};

/// Version of the document layout; bumped on any incompatible change.
pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format `{s}` (expected json or csv)")),
        }
    }
}

/// A complete report: command echo, provenance notes and either a payload
/// or an error.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub command: Value,
    pub provenance: Vec<String>,
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Payload(Value),
    Error(Value),
}

impl Document {
    pub fn to_value(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), SCHEMA_VERSION.into());
        doc.insert("command".into(), self.command.clone());
        doc.insert("provenance".into(), self.provenance.clone().into());
        match &self.body {
            Body::Payload(p) => doc.insert("payload".into(), p.clone()),
            Body::Error(e) => doc.insert("error".into(), e.clone()),
        };
        Value::Object(doc)
    }

    pub fn payload(&self) -> Option<&Value> {
        match &self.body {
            Body::Payload(p) => Some(p),
            Body::Error(_) => None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(&self.to_value()),
            Format::Csv => match &self.body {
                Body::Payload(p) => to_csv(p),
                Body::Error(e) => to_csv(e),
            },
        }
    }
}

pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn number(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        i.to_string()
    } else if let Some(u) = n.as_u64() {
        u.to_string()
    } else {
        format_real(n.as_f64().expect("serde_json numbers are i64, u64 or f64"))
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    write_json(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_json(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.push_str(&"  ".repeat(n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            // scalar lists stay on one line
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_json(out, item, indent);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_json(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(out, indent + 1);
                let _ = write!(out, "{}: ", Value::String(k.clone()));
                write_json(out, item, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

type Row = Vec<(String, String)>;

fn flatten_into(row: &mut Row, prefix: &str, v: &Value) {
    let child = |k: &str| if prefix.is_empty() { k.to_owned() } else { format!("{prefix}.{k}") };
    match v {
        Value::Null => row.push((prefix.to_owned(), String::new())),
        Value::Bool(b) => row.push((prefix.to_owned(), b.to_string())),
        Value::Number(n) => row.push((prefix.to_owned(), number(n))),
        Value::String(s) => row.push((prefix.to_owned(), s.clone())),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten_into(row, &child(&i.to_string()), item);
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                flatten_into(row, &child(k), item);
            }
        }
    }
}

fn is_table(v: &Value) -> bool {
    matches!(v, Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object))
}

/// `(record, cells)` rows of the flat projection.
pub fn flatten(payload: &Value) -> Vec<(String, Row)> {
    let mut summary = Row::new();
    let mut tables = Vec::new();
    match payload {
        Value::Object(map) => {
            for (k, v) in map {
                if is_table(v) {
                    for item in v.as_array().expect("checked by is_table") {
                        let mut row = Row::new();
                        flatten_into(&mut row, "", item);
                        tables.push((k.clone(), row));
                    }
                } else {
                    flatten_into(&mut summary, k, v);
                }
            }
        }
        other => flatten_into(&mut summary, "value", other),
    }
    let mut rows = Vec::with_capacity(tables.len() + 1);
    if !summary.is_empty() {
        rows.push(("summary".to_owned(), summary));
    }
    rows.extend(tables);
    rows
}

pub fn to_csv(payload: &Value) -> String {
    let rows = flatten(payload);
    let mut columns: Vec<&str> = Vec::new();
    for (_, row) in &rows {
        for (k, _) in row {
            if !columns.contains(&k.as_str()) {
                columns.push(k);
            }
        }
    }
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let header = std::iter::once("record").chain(columns.iter().copied());
    writer.write_record(header).expect("writing to memory");
    for (record, row) in &rows {
        let cells = columns.iter().map(|c| row.iter().find(|(k, _)| k == c).map_or("", |(_, v)| v.as_str()));
        writer
            .write_record(std::iter::once(record.as_str()).chain(cells))
            .expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("cells are UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn reals_carry_17_significant_digits() {
        assert_eq!(format_real(1.0), "1.0000000000000000e0");
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(-2.5e-300), "-2.5000000000000000e-300");
        for v in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-310, f64::MAX] {
            assert_eq!(format_real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_is_valid_and_sorted() {
        let v = json!({"b": 1, "a": [0.5, 2], "c": {"z": true, "y": null}, "d": [{"x": 1.0}]});
        let text = to_json(&v);
        assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), v);
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
        assert!(text.contains("[5.0000000000000000e-1, 2]"));
    }

    #[test]
    fn csv_projection() {
        let v = json!({
            "value": 2.0,
            "argmax": [0.5, 0.0],
            "profile": [{"coordinate": 0.0, "value": 1.0}, {"coordinate": 0.5, "value": 1.5}],
        });
        let text = to_csv(&v);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "record,argmax.0,argmax.1,value,coordinate");
        assert_eq!(lines[1], "summary,5.0000000000000000e-1,0.0000000000000000e0,2.0000000000000000e0,");
        assert_eq!(lines[2], "profile,,,1.0000000000000000e0,0.0000000000000000e0");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn csv_quotes_text_with_commas() {
        let text = to_csv(&json!({"measure": "atoms:[(0.5,1.0)]"}));
        assert_eq!(text, "record,measure\nsummary,\"atoms:[(0.5,1.0)]\"\n");
    }
}
