//! Tabular output: CSV with `# key=value` metadata lines, or JSON.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! table read back with [`Table::read_csv`] re-emits byte for byte.

use std::io::{self, BufRead, Write};

use serde_json::{json, Map};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Num(f64),
    /// A number shown with a fixed count of decimals.
    Fixed(f64, usize),
    Text(String),
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Num(x) => x.to_string(),
            Value::Fixed(x, d) => format!("{x:.d$}"),
            Value::Text(s) => s.clone(),
        }
    }

    /// Recovers the most specific value that renders back to `raw`.
    pub fn parse(raw: &str) -> Value {
        if let Ok(i) = raw.parse::<i64>() {
            if i.to_string() == raw {
                return Value::Int(i);
            }
        }
        if let Ok(x) = raw.parse::<f64>() {
            if x.to_string() == raw {
                return Value::Num(x);
            }
            if let Some((_, frac)) = raw.split_once('.') {
                let v = Value::Fixed(x, frac.len());
                if v.render() == raw {
                    return v;
                }
            }
        }
        Value::Text(raw.to_owned())
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Int(i) => json!(i),
            Value::Num(x) | Value::Fixed(x, _) => json!(x),
            Value::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub meta: Vec<(String, String)>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Table {
            command: command.to_owned(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        let key = key.into();
        let value = value.to_string().replace(['\n', '\r'], " ");
        match self.meta.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.meta.push((key, value)),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# command={}", self.command)?;
        for (k, v) in &self.meta {
            writeln!(out, "# {k}={v}")?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::render))?;
        }
        w.flush()
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), json!(v));
        }
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Value::to_json).collect())
            .collect();
        let doc = json!({
            "command": self.command,
            "columns": self.columns,
            "rows": rows,
            "meta": meta,
        });
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)
    }

    pub fn read_csv<R: BufRead>(input: R) -> io::Result<Table> {
        let mut command = None;
        let mut meta = Vec::new();
        let mut body = String::new();
        let mut in_header = true;
        for line in input.lines() {
            let line = line?;
            if in_header {
                if let Some(entry) = line.strip_prefix("# ") {
                    let (k, v) = entry
                        .split_once('=')
                        .ok_or_else(|| bad("metadata without '='"))?;
                    if k == "command" && command.is_none() {
                        command = Some(v.to_owned());
                    } else {
                        meta.push((k.to_owned(), v.to_owned()));
                    }
                    continue;
                }
                in_header = false;
            }
            body.push_str(&line);
            body.push('\n');
        }
        let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let columns = reader.headers()?.iter().map(str::to_owned).collect();
        let rows = reader
            .records()
            .map(|r| r.map(|rec| rec.iter().map(Value::parse).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Table {
            command: command.ok_or_else(|| bad("missing '# command=' line"))?,
            columns,
            rows,
            meta,
        })
    }
}

fn bad(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}
