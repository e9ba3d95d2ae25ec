//! Table rendering (CSV / JSON) and atomic file output.

use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone)]
pub enum Field {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Real(v) => format!("{v:.16e}"),
            Field::Int(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Real(v) => json!(v),
            Field::Int(v) => json!(v),
            Field::Bool(v) => json!(v),
            Field::Text(s) => json!(s),
            Field::Empty => Value::Null,
        }
    }
}

/// A command's result: metadata lines, a table, and optionally a custom
/// JSON payload replacing the row objects.
pub struct Output {
    pub preamble: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
    pub json_data: Option<Value>,
}

impl Output {
    pub fn table(header: &[&str]) -> Self {
        Self {
            preamble: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            json_data: None,
        }
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.preamble.push((key.into(), value.to_string()));
    }

    pub fn to_csv(&self) -> io::Result<Vec<u8>> {
        let mut buf = Vec::new();
        for (k, v) in &self.preamble {
            writeln!(buf, "# {k}={v}")?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(buf);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Field::csv))?;
        }
        w.into_inner().map_err(|e| e.into_error())
    }

    pub fn to_json(&self, meta: Value) -> io::Result<Vec<u8>> {
        let data = match &self.json_data {
            Some(v) => v.clone(),
            None => Value::Array(
                self.rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.header.iter().cloned().zip(row.iter().map(Field::json)).collect();
                        Value::Object(obj)
                    })
                    .collect(),
            ),
        };
        let mut buf = serde_json::to_vec_pretty(&json!({ "meta": meta, "data": data }))?;
        buf.push(b'\n');
        Ok(buf)
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// or to stdout when no path is given.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> io::Result<()> {
    match path {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
