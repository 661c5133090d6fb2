//! File writers. Every file starts with the same provenance block: `#`
//! comment lines for CSV, a `metadata` object for JSON.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metadata {
    pub command: &'static str,
    pub preset: Option<String>,
    pub config_hash: String,
    pub units: String,
}

impl Metadata {
    fn pairs(&self) -> [(&'static str, String); 5] {
        [
            ("tool", format!("magphon {}", env!("CARGO_PKG_VERSION"))),
            ("command", self.command.to_string()),
            ("preset", self.preset.clone().unwrap_or_else(|| "none".into())),
            ("config_hash", self.config_hash.clone()),
            ("units", self.units.clone()),
        ]
    }

    fn json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (k, v) in self.pairs() {
            map.insert(k.into(), Value::String(v));
        }
        Value::Object(map)
    }
}

/// Shortest round-trip scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Column-oriented CSV table.
pub struct Table {
    header: &'static [&'static str],
    body: String,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Table {
            header,
            body: String::new(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            self.body.push_str(&num(*v));
        }
        self.body.push('\n');
    }

    /// Row whose last column is a 0/1 flag.
    pub fn row_flagged(&mut self, values: &[f64], flag: bool) {
        self.row(values);
        self.body.pop();
        self.body.push_str(if flag { ",1\n" } else { ",0\n" });
    }

    pub fn render(&self, meta: &Metadata) -> String {
        let mut out = String::with_capacity(self.body.len() + 256);
        for (k, v) in meta.pairs() {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        out.push_str(&self.body);
        out
    }
}

pub fn json_document(meta: &Metadata, data: Value) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "metadata": meta.json(), "data": data }))
        .expect("json values always serialize");
    s.push('\n');
    s
}

/// Collects output files and writes them once the whole run has succeeded.
pub struct Writer<'a> {
    dir: &'a Path,
    files: Vec<(String, String)>,
}

impl<'a> Writer<'a> {
    pub fn new(dir: &'a Path) -> Self {
        Writer { dir, files: Vec::new() }
    }

    pub fn put(&mut self, name: &str, contents: &str) {
        self.files.push((name.to_string(), contents.to_string()));
    }

    pub fn finish(self) -> Result<Vec<PathBuf>, CliError> {
        let write_err = |path: &Path, source| CliError::Write {
            path: path.display().to_string(),
            source,
        };
        std::fs::create_dir_all(self.dir).map_err(|e| write_err(self.dir, e))?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, contents) in self.files {
            let path = self.dir.join(name);
            std::fs::write(&path, contents).map_err(|e| write_err(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}
