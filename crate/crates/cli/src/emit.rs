//! Versioned tables written as CSV or JSON, and the matching CSV reader.

use crate::error::{CliError, Result};
use serde_json::{Map, Value};
use std::io::Write;

pub const TAG: &str = "couette-lab";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Cell::Num(v)
        } else {
            Cell::Empty
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::from)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 12 significant digits.
pub fn fmt_num(v: f64) -> String {
    // no negative zero
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        Table { command: command.into(), meta: Vec::new(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn schema(&self) -> String {
        format!("{TAG} {} v{VERSION}", self.command)
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# {}\n", self.schema());
        for (k, v) in &self.meta {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => fmt_num(*v),
                    Cell::Text(t) => t.clone(),
                    Cell::Empty => String::new(),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    let v = match v {
                        Cell::Num(x) => serde_json::json!(x),
                        Cell::Text(t) => Value::String(t.clone()),
                        Cell::Empty => Value::Null,
                    };
                    m.insert(c.to_string(), v);
                }
                Value::Object(m)
            })
            .collect();
        let mut top = Map::new();
        top.insert("schema".into(), Value::String(self.schema()));
        top.insert("meta".into(), Value::Object(meta));
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    pub fn render(&self, fmt: Format) -> String {
        match fmt {
            Format::Csv => self.to_csv(),
            Format::Json => json_string(&self.to_json()),
        }
    }
}

pub fn json_string<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Write to the file, or to stdout when no path is given.
pub fn write_out(path: Option<&std::path::Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let out = std::io::stdout();
            let mut lock = out.lock();
            lock.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Parse a CSV table, rejecting any header that differs from the expected schema.
pub fn read_csv(text: &str, command: &str, columns: &[&'static str]) -> Result<Table> {
    let mut lines = text.lines();
    let want = format!("# {TAG} {command} v{VERSION}");
    let first = lines.next().unwrap_or_default();
    if first != want {
        return Err(CliError::Schema(format!("expected '{want}', found '{first}'")));
    }
    let mut t = Table::new(command, columns);
    let header = loop {
        match lines.next() {
            Some(l) if l.starts_with("# ") => {
                let (k, v) = l[2..]
                    .split_once('=')
                    .ok_or_else(|| CliError::Schema(format!("bad metadata line '{l}'")))?;
                t.meta(k, v);
            }
            Some(l) => break l,
            None => return Err(CliError::Schema("missing column header".into())),
        }
    };
    if header != columns.join(",") {
        return Err(CliError::Schema(format!("columns '{header}' do not match '{}'", columns.join(","))));
    }
    for (n, l) in lines.enumerate() {
        let cells: Vec<&str> = l.split(',').collect();
        if cells.len() != columns.len() {
            return Err(CliError::Schema(format!("row {} has {} cells", n + 1, cells.len())));
        }
        t.rows.push(
            cells
                .into_iter()
                .map(|c| {
                    if c.is_empty() {
                        Cell::Empty
                    } else {
                        c.parse::<f64>().map(Cell::Num).unwrap_or_else(|_| Cell::Text(c.into()))
                    }
                })
                .collect(),
        );
    }
    Ok(t)
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[i] {
                    Cell::Num(v) => Some(v),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}
