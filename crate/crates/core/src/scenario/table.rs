//! Tabular datasets and their CSV / JSON serialisation.
//!
//! Numbers are written with 12 significant digits in both formats so that
//! identical inputs give byte-identical files. CSV files start with
//! `#`-prefixed header lines and use LF line endings.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::optimize::SBP_DEFINITION;

pub const TOOL_NAME: &str = "squeezelim";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }

    fn to_csv_field(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => round_number(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Scientific notation with 12 significant digits, e.g. `8.92948000000e-3`.
/// Non-finite values are written as `nan`, `inf` or `-inf`.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.11e}")
    }
}

/// `v` rounded to 12 significant digits as a JSON number (`null` if not
/// finite).
pub fn round_number(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// Rounds every number inside `value` to 12 significant digits.
pub fn round_json(value: Value) -> Value {
    match value {
        Value::Number(n) => match n.as_f64() {
            Some(f) if !(n.is_i64() || n.is_u64()) => round_number(f),
            _ => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Flattens a serialisable struct into ordered `(column, cell)` pairs.
/// Booleans become text, `None` becomes an empty cell.
pub fn struct_cells<T: Serialize>(value: &T) -> Vec<(String, Cell)> {
    let Value::Object(map) = serde_json::to_value(value).expect("plain data serialises") else {
        panic!("struct_cells needs a struct");
    };
    map.into_iter()
        .map(|(k, v)| {
            let cell = match v {
                Value::Number(n) => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
                Value::Bool(b) => b.into(),
                Value::String(s) => Cell::Text(s),
                Value::Null => Cell::Empty,
                other => Cell::Text(other.to_string()),
            };
            (k, cell)
        })
        .collect()
}

/// A named dataset: metadata lines, fixed column order, rows of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    /// Hex SHA-256 of whatever produced the table (config file bytes or a
    /// preset description).
    pub config_hash: String,
    /// Free-form `key: value` metadata written after the fixed header lines.
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, config_hash: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            config_hash: config_hash.into(),
            notes: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, line: impl Into<String>) -> &mut Self {
        self.notes.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the columns");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All numeric values of one column, `None` for non-numeric cells.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("{TOOL_NAME} {TOOL_VERSION}"),
            format!("dataset: {}", self.name),
            format!("config_sha256: {}", self.config_hash),
            format!("sbp: {SBP_DEFINITION}"),
        ];
        lines.extend(self.notes.iter().cloned());
        lines
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for line in self.header_lines() {
            writeln!(out, "# {line}")?;
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::to_csv_field))?;
        }
        writer.flush()
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(Cell::to_json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut root = Map::new();
        root.insert("tool".into(), TOOL_NAME.into());
        root.insert("version".into(), TOOL_VERSION.into());
        root.insert("dataset".into(), self.name.clone().into());
        root.insert("config_sha256".into(), self.config_hash.clone().into());
        root.insert("sbp_definition".into(), SBP_DEFINITION.into());
        root.insert("notes".into(), self.notes.clone().into());
        root.insert("columns".into(), self.columns.clone().into());
        root.insert("rows".into(), Value::Array(rows));
        Value::Object(root)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        out.write_all(b"\n")
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Hex SHA-256 digest.
pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}
