//! Tabular reports and their JSON/CSV encodings.

use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

/// One table entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
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

/// Shortest decimal that parses back to the same double.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:?}")
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Empty => Ok(()),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Float(x) => f.write_str(&format_float(*x)),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) => Number::from_f64(*x).map_or_else(|| Value::String(format_float(*x)), Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }

    fn from_json(v: &Value) -> Result<Cell> {
        Ok(match v {
            Value::Null => Cell::Empty,
            Value::Bool(b) => Cell::Bool(*b),
            Value::Number(n) => match n.as_i64() {
                Some(i) if !n.is_f64() => Cell::Int(i),
                _ => Cell::Float(n.as_f64().ok_or_else(|| Error::Numeric(format!("unrepresentable number {n}")))?),
            },
            Value::String(s) => match s.as_str() {
                "NaN" => Cell::Float(f64::NAN),
                "inf" => Cell::Float(f64::INFINITY),
                "-inf" => Cell::Float(f64::NEG_INFINITY),
                _ => Cell::Text(s.clone()),
            },
            other => return Err(Error::Domain(format!("unexpected JSON value {other}"))),
        })
    }

    /// Reads a CSV field back, guessing the narrowest type that prints the same way.
    pub fn parse_field(s: &str) -> Cell {
        if s.is_empty() {
            return Cell::Empty;
        }
        match s {
            "true" => return Cell::Bool(true),
            "false" => return Cell::Bool(false),
            "NaN" => return Cell::Float(f64::NAN),
            "inf" => return Cell::Float(f64::INFINITY),
            "-inf" => return Cell::Float(f64::NEG_INFINITY),
            _ => {}
        }
        if let Ok(i) = s.parse::<i64>() {
            if i.to_string() == s {
                return Cell::Int(i);
            }
        }
        if let Ok(x) = s.parse::<f64>() {
            if format_float(x) == s {
                return Cell::Float(x);
            }
        }
        Cell::Text(s.to_owned())
    }

    /// Equality that treats NaN as equal to itself.
    pub fn same(&self, other: &Cell) -> bool {
        match (self, other) {
            (Cell::Float(a), Cell::Float(b)) => a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()),
            _ => self == other,
        }
    }
}

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Domain(format!("unknown format {s:?}, expected json or csv"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Run metadata carried alongside the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Meta {
    pub command: String,
    pub version: String,
    pub precision: String,
    pub seed: Option<u64>,
    pub parameters: Vec<(String, Cell)>,
    pub summary: Vec<(String, Cell)>,
    pub notes: Vec<String>,
}

impl Meta {
    pub fn new(command: &str) -> Self {
        Meta {
            command: command.to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            precision: "double".to_owned(),
            seed: None,
            parameters: Vec::new(),
            summary: Vec::new(),
            notes: Vec::new(),
        }
    }
}

/// A table with fixed column order plus metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub meta: Meta,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

fn pairs_to_json(pairs: &[(String, Cell)]) -> Value {
    Value::Object(pairs.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
}

fn pairs_from_json(v: Option<&Value>) -> Result<Vec<(String, Cell)>> {
    match v {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Object(m)) => m.iter().map(|(k, v)| Ok((k.clone(), Cell::from_json(v)?))).collect(),
        Some(other) => Err(Error::Domain(format!("expected an object, got {other}"))),
    }
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| Error::Domain(format!("missing field {key:?}")))
}

fn text(v: &Value) -> Result<String> {
    v.as_str().map(str::to_owned).ok_or_else(|| Error::Domain(format!("expected a string, got {v}")))
}

impl Report {
    pub fn new(meta: Meta, columns: Vec<String>) -> Self {
        Report { meta, columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Domain(format!("row has {} cells for {} columns", row.len(), self.columns.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Cell at (row, column name).
    pub fn get(&self, row: usize, column: &str) -> Option<&Cell> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.get(row)?.get(j)
    }

    pub fn to_json_value(&self) -> Value {
        let mut meta = Map::new();
        meta.insert("command".into(), Value::String(self.meta.command.clone()));
        meta.insert("version".into(), Value::String(self.meta.version.clone()));
        meta.insert("precision".into(), Value::String(self.meta.precision.clone()));
        meta.insert("seed".into(), self.meta.seed.map_or(Value::Null, Value::from));
        meta.insert("columns".into(), Value::Array(self.columns.iter().cloned().map(Value::String).collect()));
        meta.insert("parameters".into(), pairs_to_json(&self.meta.parameters));
        meta.insert("summary".into(), pairs_to_json(&self.meta.summary));
        meta.insert("notes".into(), Value::Array(self.meta.notes.iter().cloned().map(Value::String).collect()));
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect()))
            .collect();
        let mut top = Map::new();
        top.insert("meta".into(), Value::Object(meta));
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Report> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Domain(format!("invalid JSON: {e}")))?;
        let top = v.as_object().ok_or_else(|| Error::Domain("top level must be an object".into()))?;
        let m = field(top, "meta")?.as_object().ok_or_else(|| Error::Domain("meta must be an object".into()))?;
        let columns: Vec<String> = field(m, "columns")?
            .as_array()
            .ok_or_else(|| Error::Domain("columns must be an array".into()))?
            .iter()
            .map(text)
            .collect::<Result<_>>()?;
        let seed = match field(m, "seed")? {
            Value::Null => None,
            v => Some(v.as_u64().ok_or_else(|| Error::Domain(format!("bad seed {v}")))?),
        };
        let notes = match m.get("notes") {
            Some(Value::Array(a)) => a.iter().map(text).collect::<Result<_>>()?,
            _ => Vec::new(),
        };
        let meta = Meta {
            command: text(field(m, "command")?)?,
            version: text(field(m, "version")?)?,
            precision: text(field(m, "precision")?)?,
            seed,
            parameters: pairs_from_json(m.get("parameters"))?,
            summary: pairs_from_json(m.get("summary"))?,
            notes,
        };
        let rows = field(top, "rows")?
            .as_array()
            .ok_or_else(|| Error::Domain("rows must be an array".into()))?
            .iter()
            .map(|r| {
                let o = r.as_object().ok_or_else(|| Error::Domain("rows must be objects".into()))?;
                columns.iter().map(|c| Cell::from_json(o.get(c).unwrap_or(&Value::Null))).collect()
            })
            .collect::<Result<_>>()?;
        Ok(Report { meta, columns, rows })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        let io = |e: csv::Error| Error::Numeric(format!("CSV encoding failed: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::to_string)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Numeric(format!("CSV encoding failed: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Numeric(e.to_string()))
    }

    /// Columns and rows from CSV text; metadata is not part of the CSV form.
    pub fn from_csv(s: &str) -> Result<(Vec<String>, Vec<Vec<Cell>>)> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(s.as_bytes());
        let bad = |e: csv::Error| Error::Domain(format!("invalid CSV: {e}"));
        let columns = r.headers().map_err(bad)?.iter().map(str::to_owned).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(Cell::parse_field).collect()).map_err(bad))
            .collect::<Result<_>>()?;
        Ok((columns, rows))
    }

    pub fn serialize(&self, format: Format) -> Result<Vec<u8>> {
        Ok(match format {
            Format::Json => self.to_json().into_bytes(),
            Format::Csv => self.to_csv()?.into_bytes(),
        })
    }

    /// Structural equality with NaN treated as equal to itself.
    pub fn same(&self, other: &Report) -> bool {
        let same_pairs = |a: &[(String, Cell)], b: &[(String, Cell)]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.0 == y.0 && x.1.same(&y.1))
        };
        self.columns == other.columns
            && self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same(y)))
            && self.meta.command == other.meta.command
            && self.meta.version == other.meta.version
            && self.meta.precision == other.meta.precision
            && self.meta.seed == other.meta.seed
            && self.meta.notes == other.meta.notes
            && same_pairs(&self.meta.parameters, &other.meta.parameters)
            && same_pairs(&self.meta.summary, &other.meta.summary)
    }
}
