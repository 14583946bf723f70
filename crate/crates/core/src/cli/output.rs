use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Schema tag `frame-qfi/<command>/v1`.
pub fn schema(command: &str) -> String {
    format!("frame-qfi/{command}/v1")
}

/// Destination for a run's artifact: a file or standard output.
pub fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `{"schema", "version", "config", "result"}`.
pub fn write_json<C: Serialize, R: Serialize>(
    out: &mut dyn Write,
    command: &str,
    config: &C,
    result: &R,
) -> io::Result<()> {
    let doc = json!({
        "schema": schema(command),
        "version": VERSION,
        "config": to_value(config)?,
        "result": to_value(result)?,
    });
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    out.flush()
}

fn to_value<T: Serialize>(x: &T) -> io::Result<Value> {
    serde_json::to_value(x).map_err(io::Error::other)
}

/// A table: `#`-prefixed metadata lines, one header line, then rows.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x}"),
            Cell::Int(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(x) => json!(x),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<C: Serialize>(&self, out: &mut dyn Write, command: &str, config: &C) -> io::Result<()> {
        writeln!(out, "# schema: {}", schema(command))?;
        writeln!(out, "# version: {VERSION}")?;
        writeln!(out, "# config: {}", serde_json::to_string(config).map_err(io::Error::other)?)?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        out.flush()
    }

    /// Rows as JSON objects keyed by column name.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    Value::Object(
                        self.columns
                            .iter()
                            .zip(row)
                            .map(|(k, v)| (k.to_string(), v.to_json()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Cell::Num(0.5), Cell::Empty]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf, "demo", &json!({"k": 1})).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# schema: frame-qfi/demo/v1");
        assert!(lines[1].starts_with("# version: "));
        assert_eq!(lines[2], "# config: {\"k\":1}");
        assert_eq!(lines[3], "a,b");
        assert_eq!(lines[4], "0.5,");
        assert_eq!(t.to_json(), json!([{"a": 0.5, "b": null}]));
    }
}
