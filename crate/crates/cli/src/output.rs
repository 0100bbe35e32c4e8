//! Tables with a metadata block, rendered as CSV or JSON.

use std::io::Write;

use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(value: Option<f64>) -> Self {
        value.map_or(Cell::Empty, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => Value::from(*v),
            Cell::Num(v) => Value::String(format_number(*v)),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        // no negative zero
        format!("{:.16e}", v + 0.0)
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Ordered key/value header.
#[derive(Debug, Clone, Default)]
pub struct Metadata {
    entries: Vec<(String, Cell)>,
}

impl Metadata {
    pub fn push(&mut self, key: impl Into<String>, value: Cell) {
        self.entries.push((key.into(), value));
    }

    pub fn num(&mut self, key: impl Into<String>, value: f64) {
        self.push(key, Cell::Num(value));
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.push(key, Cell::Text(value.into()));
    }
}

pub fn render(format: Format, meta: &Metadata, table: &Table) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => render_csv(meta, table),
        Format::Json => render_json(meta, table),
    }
}

fn render_csv(meta: &Metadata, table: &Table) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    for (key, value) in &meta.entries {
        writeln!(out, "# {key} = {}", value.csv())?;
    }
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    writer.write_record(&table.columns).map_err(io)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(Cell::csv)).map_err(io)?;
    }
    writer.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

fn render_json(meta: &Metadata, table: &Table) -> Result<Vec<u8>, CliError> {
    let metadata: Map<String, Value> = meta.entries.iter().map(|(k, v)| (k.clone(), v.json())).collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| (c.to_string(), v.json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("metadata".into(), Value::Object(metadata));
    doc.insert("columns".into(), table.columns.iter().map(|c| Value::from(*c)).collect());
    doc.insert("rows".into(), Value::Array(rows));
    let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).map_err(|e| CliError::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}
