//! Tabular output: CSV with a versioned comment header, or a JSON document
//! carrying the configuration alongside the rows.

use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;

use crate::config::RunConfig;

/// Bumped whenever a column is added, removed or reordered.
pub const SCHEMA_VERSION: u32 = 1;

pub fn version_line(command: &str) -> String {
    format!(
        "godel-c60 {} {command} schema {SCHEMA_VERSION}",
        env!("CARGO_PKG_VERSION")
    )
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// 17 significant digits in exponent notation.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) => csv_field(t),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(format_float(*v)),
            Cell::Bool(b) => json!(b),
            Cell::Text(t) => json!(t),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: Vec<&'static str>) -> Self {
        Self {
            name: name.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }

    fn write_csv(&self, out: &mut String) {
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
    }

    fn json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        json!({ "name": self.name, "columns": self.columns, "rows": rows })
    }
}

/// Renders one or more tables. Several CSV tables are separated by a
/// `# table: <name>` comment line each.
pub fn render_csv(command: &str, tables: &[Table]) -> String {
    let mut out = format!("# {}\n", version_line(command));
    for (i, t) in tables.iter().enumerate() {
        if tables.len() > 1 {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "# table: {}", t.name);
        }
        t.write_csv(&mut out);
    }
    out
}

pub fn render_structured<E: Serialize>(command: &str, cfg: &RunConfig, tables: &[Table], extra: Option<&E>) -> String {
    let mut doc = json!({
        "version": version_line(command),
        "command": command,
        "config": cfg,
        "tables": tables.iter().map(Table::json).collect::<Vec<_>>(),
    });
    if let Some(e) = extra {
        doc["report"] = serde_json::to_value(e).expect("report serializes");
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        assert_eq!(format_float(f64::NAN), "NaN");
        let v = 1.0 / 3.0;
        assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("t", vec!["a", "b", "c"]);
        t.push(vec![Cell::Int(1), Cell::from("x,y"), Cell::Empty]);
        let s = render_csv("spectrum", &[t]);
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# godel-c60 "));
        assert!(lines[0].ends_with("spectrum schema 1"));
        assert_eq!(lines[1], "a,b,c");
        assert_eq!(lines[2], "1,\"x,y\",");
    }

    #[test]
    fn structured_carries_config() {
        let mut t = Table::new("t", vec!["v"]);
        t.push(vec![Cell::Float(f64::INFINITY)]);
        let s = render_structured::<()>("current", &RunConfig::default(), &[t], None);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["command"], "current");
        assert_eq!(v["config"]["model"]["defects"], 12);
        assert_eq!(v["tables"][0]["rows"][0][0], "inf");
    }
}
