//! Tabular output shared by every command.
//!
//! CSV goes to the output with a fixed header; metadata and warnings go to
//! stderr as `# key: value` lines. JSON is a single object carrying all of it.

use std::io::{self, Write};

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
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

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
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

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Str(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            // serde_json writes the shortest representation that round-trips
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) => Value::Null,
            Cell::Str(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Record {
    pub command: &'static str,
    pub argv: Vec<String>,
    pub parameters: Vec<(&'static str, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Vec<(&'static str, Cell)>,
    pub warnings: Vec<String>,
}

impl Record {
    pub fn new(command: &'static str, argv: &[String], columns: &[&'static str]) -> Self {
        Record {
            command,
            argv: argv.to_vec(),
            parameters: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            metadata: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.metadata.push((key, value.into()));
    }

    pub fn write_csv(&self, out: &mut dyn Write, side: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        writeln!(side, "# command: {}", self.command)?;
        for (k, v) in self.parameters.iter().chain(&self.metadata) {
            writeln!(side, "# {k}: {}", v.csv())?;
        }
        for w in &self.warnings {
            writeln!(side, "warning: {w}")?;
        }
        Ok(())
    }

    pub fn to_json(&self, timestamp: Option<u64>) -> Value {
        let pairs = |v: &[(&'static str, Cell)]| -> Map<String, Value> {
            v.iter().map(|(k, c)| (k.to_string(), c.json())).collect()
        };
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let mut obj = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "argv": self.argv,
            "parameters": pairs(&self.parameters),
            "columns": self.columns,
            "rows": rows,
            "metadata": pairs(&self.metadata),
            "warnings": self.warnings,
        });
        if let Some(t) = timestamp {
            obj["timestamp_unix"] = json!(t);
        }
        obj
    }

    pub fn write_json(&self, out: &mut dyn Write, timestamp: Option<u64>) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json(timestamp))?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Record {
        let mut r = Record::new("demo", &["demo".into()], &["a", "b", "c"]);
        r.push(vec![1usize.into(), 0.1.into(), "x".into()]);
        r.push(vec![2usize.into(), f64::NAN.into(), true.into()]);
        r.meta("tol", 1e-12);
        r
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 1.7976931348623157e308, 5e-324] {
            assert_eq!(fmt_float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let (mut out, mut side) = (Vec::new(), Vec::new());
        sample().write_csv(&mut out, &mut side).unwrap();
        let out = String::from_utf8(out).unwrap();
        assert_eq!(out, "a,b,c\n1,1.0000000000000001e-1,x\n2,NaN,true\n");
        assert!(String::from_utf8(side).unwrap().contains("# tol: 9.9999999999999998e-13"));
    }

    #[test]
    fn json_layout() {
        let v = sample().to_json(None);
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["rows"][1][1], Value::Null);
        assert!(v.get("timestamp_unix").is_none());
        assert_eq!(sample().to_json(Some(7))["timestamp_unix"], 7);
    }
}
