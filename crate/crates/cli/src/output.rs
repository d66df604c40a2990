//! Tabular output shared by every subcommand.
//!
//! CSV floats are written as `{:.16e}` (17 significant digits, round-trips
//! any `f64`); missing values are empty cells. JSON carries the same rows as
//! objects keyed by column, plus a `meta` object, with missing values as
//! `null`.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Number, Value as Json};

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Missing,
}

impl Value {
    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Value::Missing, Value::Float)
    }

    fn to_csv(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Float(x) => format_float(*x),
            Value::Text(s) => s.clone(),
            Value::Missing => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => Json::from(*i),
            Value::Float(x) => Number::from_f64(*x).map_or(Json::Null, Json::Number),
            Value::Text(s) => Json::from(s.as_str()),
            Value::Missing => Json::Null,
        }
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Column names plus rows in emission order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of one column, by name.
    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

/// A table plus the metadata echoed into JSON output.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub meta: Map<String, Json>,
    pub table: Table,
}

impl Dataset {
    pub fn new(command: &str, config: Json, table: Table) -> Self {
        let mut meta = Map::new();
        meta.insert("command".into(), Json::from(command));
        meta.insert("version".into(), Json::from(env!("CARGO_PKG_VERSION")));
        meta.insert("config".into(), config);
        Self { meta, table }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Json>) -> Self {
        self.meta.insert(key.into(), value.into());
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => write_csv(&self.table, out),
            Format::Json => write_json(self, out),
        }
    }
}

pub fn write_csv(table: &Table, out: &mut dyn Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns).map_err(csv_error)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Value::to_csv)).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(data: &Dataset, out: &mut dyn Write) -> Result<(), CliError> {
    let mut meta = data.meta.clone();
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    meta.insert("generated_at".into(), Json::from(stamp));
    meta.insert("columns".into(), Json::from(data.table.columns.clone()));

    let rows: Vec<Json> = data
        .table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Json> = data
                .table
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| (c.to_string(), v.to_json()))
                .collect();
            Json::Object(obj)
        })
        .collect();

    let mut doc = Map::new();
    doc.insert("meta".into(), Json::Object(meta));
    doc.insert("rows".into(), Json::Array(rows));
    serde_json::to_writer_pretty(&mut *out, &Json::Object(doc)).map_err(|e| CliError::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn csv_error(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::Io(io),
        other => CliError::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dataset {
        let mut t = Table::new(&["tau", "q", "n"]);
        t.push(vec![0.0.into(), Value::Missing, 3usize.into()]);
        t.push(vec![0.1.into(), Value::Float(-0.25), 4usize.into()]);
        Dataset::new("test", Json::Null, t)
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -1.0 / 3.0, 6.02e23, 1e-300, 0.0] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write(Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "tau,q,n");
        assert_eq!(lines[1], "0.0000000000000000e0,,3");
        assert_eq!(lines[2], "1.0000000000000001e-1,-2.5000000000000000e-1,4");
    }

    #[test]
    fn json_layout() {
        let mut buf = Vec::new();
        sample().write(Format::Json, &mut buf).unwrap();
        let doc: Json = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc["meta"]["command"], "test");
        assert!(doc["rows"][0]["q"].is_null());
        assert_eq!(doc["rows"][1]["q"].as_f64(), Some(-0.25));
        let keys: Vec<&String> = doc["rows"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["tau", "q", "n"]);
    }
}
