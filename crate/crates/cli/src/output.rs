//! Result blocks and CSV tables.

use std::io::Write;
use std::path::Path;

use quadcalc::{VertexField, C64};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{usage, CliError, Result};

pub const SCHEMA: &str = "quadcalc/1";

/// Floats in CSV cells, with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io { path: "<csv>".into(), source: e.into_error() })?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    /// `id,re,im` rows for the defined entries of `values`.
    pub fn complex_rows(values: &[Option<C64>]) -> Self {
        let mut t = Table::new(&["id", "re", "im"]);
        for (i, z) in values.iter().enumerate() {
            if let Some(z) = z {
                t.push(vec![i.to_string(), num(z.re), num(z.im)]);
            }
        }
        t
    }

    pub fn vertex_field(f: &VertexField) -> Self {
        Self::complex_rows(f.options())
    }
}

/// What a subcommand produced: the JSON result, an optional table for
/// `--format csv`, and the number of failed checks.
#[derive(Debug, Clone)]
pub struct Report {
    pub result: Value,
    pub table: Option<Table>,
    pub failures: usize,
}

impl Report {
    pub fn new(result: impl Serialize) -> Result<Self> {
        Ok(Self { result: serde_json::to_value(result)?, table: None, failures: 0 })
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }
}

pub fn ok_block(command: &str, graph: Option<Value>, result: Value) -> Value {
    let mut block = json!({ "schema": SCHEMA, "command": command, "status": "ok" });
    if let Some(graph) = graph {
        block["graph"] = graph;
    }
    block["result"] = result;
    block
}

pub fn error_block(command: &str, e: &CliError) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "status": "error",
        "error": { "kind": e.kind(), "message": e.to_string() },
    })
}

pub fn json_text(value: &Value) -> String {
    let mut s = quadcalc::json::to_string(value);
    s.push('\n');
    s
}

/// Writes to `out`, or to stdout when absent.
pub fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

pub fn csv_of(report: &Report, command: &str) -> Result<String> {
    report.table.as_ref().ok_or_else(|| usage(format!("`{command}` has no CSV output; use --format json")))?.to_csv()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_cells_have_seventeen_digits() {
        let t = Table::complex_rows(&[Some(C64::new(0.1, -3.0)), None, Some(C64::new(0.0, 1.0 / 3.0))]);
        let csv = t.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines, ["id,re,im", "0,1.0000000000000001e-1,-3.0000000000000000e0", "2,0.0000000000000000e0,3.3333333333333331e-1"]);
    }

    #[test]
    fn blocks_carry_the_schema() {
        let b = ok_block("energy", None, json!({ "energy": 1.5 }));
        assert_eq!(b["schema"], SCHEMA);
        assert_eq!(b["status"], "ok");
        let e = error_block("solve", &usage("bad"));
        assert_eq!(e["error"]["kind"], "usage");
    }
}
