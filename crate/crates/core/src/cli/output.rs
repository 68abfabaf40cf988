//! Deterministic CSV/JSON emitters with an embedded provenance header.

use serde::Serialize;
use serde_json::{json, Map, Value};
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => fmt_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => csv_escape(s),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) | Cell::Empty => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Header content shared by all outputs: tool version, the full config echo,
/// tolerance provenance and free-form notes.
#[derive(Debug, Clone, PartialEq)]
pub struct Meta {
    pub command: String,
    pub config: Value,
    pub tolerances: Vec<(String, f64, String)>,
    pub notes: Vec<String>,
    pub summary: Map<String, Value>,
}

impl Meta {
    pub fn new(command: &str, config: Value) -> Self {
        Self {
            command: command.to_string(),
            config,
            tolerances: Vec::new(),
            notes: Vec::new(),
            summary: Map::new(),
        }
    }

    pub fn tolerance(mut self, name: &str, value: f64, source: &str) -> Self {
        self.tolerances.push((name.to_string(), value, source.to_string()));
        self
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn summarize(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }

    fn to_json(&self) -> Value {
        let tol: Vec<Value> = self
            .tolerances
            .iter()
            .map(|(n, v, s)| json!({"name": n, "value": v, "source": s}))
            .collect();
        json!({
            "tool": "isokappa",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "tolerances": tol,
            "notes": self.notes,
            "summary": Value::Object(self.summary.clone()),
        })
    }
}

pub fn write_csv<W: Write>(w: &mut W, meta: &Meta, table: &Table) -> io::Result<()> {
    writeln!(w, "# isokappa {} {}", env!("CARGO_PKG_VERSION"), meta.command)?;
    writeln!(w, "# config: {}", meta.config)?;
    for (name, v, source) in &meta.tolerances {
        writeln!(w, "# tolerance {name} = {} ({source})", fmt_float(*v))?;
    }
    for (k, v) in &meta.summary {
        writeln!(w, "# {k}: {v}")?;
    }
    for n in &meta.notes {
        writeln!(w, "# note: {n}")?;
    }
    writeln!(w, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let line: Vec<String> = row.iter().map(Cell::csv).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn table_json(table: &Table) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut m = Map::new();
            for (c, v) in table.columns.iter().zip(row) {
                m.insert(c.clone(), v.json());
            }
            Value::Object(m)
        })
        .collect();
    Value::Array(rows)
}

pub fn write_json<W: Write>(w: &mut W, meta: &Meta, data: Value) -> io::Result<()> {
    let doc = json!({"meta": meta.to_json(), "data": data});
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}

pub fn write_table<W: Write>(w: &mut W, format: Format, meta: &Meta, table: &Table) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(w, meta, table),
        Format::Json => write_json(w, meta, table_json(table)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = fmt_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(fmt_float(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["x", "label"]);
        t.push(vec![1.5.into(), "a,b".into()]);
        t.push(vec![Cell::Empty, "c".into()]);
        let meta = Meta::new("test", json!({"k": 1})).tolerance("tol", 1e-10, "default");
        let mut buf = Vec::new();
        write_csv(&mut buf, &meta, &t).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("# tolerance tol = 1.0000000000000000e-10 (default)"));
        assert!(s.ends_with("x,label\n1.5000000000000000e0,\"a,b\"\n,c\n"));
    }
}
