//! Tabular output: CSV with a `#` metadata header, or JSON.

use serde_json::{Map, Value};
use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    U(usize),
    B(bool),
    S(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64.
            Cell::F(v) => format!("{v:.16e}"),
            Cell::U(v) => v.to_string(),
            Cell::B(v) => v.to_string(),
            Cell::S(v) => v.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(v) => Value::from(*v),
            Cell::U(v) => Value::from(*v),
            Cell::B(v) => Value::from(*v),
            Cell::S(v) => Value::from(v.as_str()),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            meta: vec![
                ("generator".into(), format!("wirescat {}", env!("CARGO_PKG_VERSION"))),
                ("command".into(), command.into()),
            ],
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.into(), value.to_string()));
    }

    /// Real-valued metadata at full precision.
    pub fn meta_f(&mut self, key: &str, value: f64) {
        self.meta(key, format!("{value:.16e}"));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# {k}: {v}")?;
        }
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::csv))?;
        }
        out.flush()
    }

    pub fn to_json(&self) -> Value {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect())
            })
            .collect();
        let mut top = Map::new();
        top.insert("metadata".into(), Value::Object(meta));
        top.insert("columns".into(), Value::from(self.columns.clone()));
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.to_json())?;
        writeln!(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["x", "n", "flag", "name"]);
        t.meta_f("k", 0.1);
        t.push(vec![Cell::F(1.0 / 3.0), Cell::U(2), Cell::B(true), Cell::S("a".into())]);
        t.push(vec![Cell::F(f64::NAN), Cell::U(0), Cell::B(false), Cell::S("b".into())]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# generator: wirescat "));
        assert_eq!(lines[1], "# command: demo");
        assert_eq!(lines[2], "# k: 1.0000000000000001e-1");
        assert_eq!(lines[3], "x,n,flag,name");
        assert_eq!(lines[4], "3.3333333333333331e-1,2,true,a");
        assert_eq!(lines[5], "NaN,0,false,b");
        assert_eq!("3.3333333333333331e-1".parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn json_rows_are_objects() {
        let mut t = Table::new("demo", &["x", "n"]);
        t.push(vec![Cell::F(f64::NAN), Cell::U(3)]);
        let v = t.to_json();
        assert_eq!(v["rows"][0]["x"], Value::Null);
        assert_eq!(v["rows"][0]["n"], 3);
        assert_eq!(v["metadata"]["command"], "demo");
    }
}
