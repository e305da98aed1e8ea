//! Tables, assertions and report files.
//!
//! Every scenario produces a [`Report`]. Writing one is deterministic: cells
//! are formatted with the shortest round-trip representation, JSON objects
//! keep column order, and the manifest carries no timestamps.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
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

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}`, expected csv or json")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v:?}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Empty => Ok(()),
        }
    }
}

impl Cell {
    fn to_json(&self) -> Json {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) | Cell::Empty => Json::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
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

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u8> for Cell {
    fn from(v: u8) -> Self {
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
        Cell::Text(v.to_string())
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

/// Builds a row from heterogeneous values.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => {
        vec![$($crate::output::Cell::from($x)),*]
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn to_json(&self) -> Json {
        Json::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Json> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.clone(), v.to_json()))
                        .collect();
                    Json::Object(obj)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(serde_json::to_string_pretty(&self.to_json())? + "\n"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Assertion {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub scenario: &'static str,
    pub seed: Option<u64>,
    pub parameters: Json,
    pub tables: Vec<(String, Table)>,
    pub documents: Vec<(String, Json)>,
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn new(scenario: &'static str, seed: Option<u64>, parameters: impl Serialize) -> Self {
        Report {
            scenario,
            seed,
            parameters: serde_json::to_value(parameters).expect("parameters serialize"),
            tables: Vec::new(),
            documents: Vec::new(),
            assertions: Vec::new(),
        }
    }

    pub fn table(&mut self, name: &str, table: Table) {
        self.tables.push((name.to_string(), table));
    }

    pub fn document(&mut self, name: &str, doc: Json) {
        self.documents.push((name.to_string(), doc));
    }

    pub fn assert(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion::new(name, passed, detail));
    }

    pub fn get_table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn assertion_table(&self) -> Table {
        let mut t = Table::new(&["assertion", "passed", "detail"]);
        for a in &self.assertions {
            t.push(row![a.name.as_str(), a.passed, a.detail.as_str()]);
        }
        t
    }

    /// File names and contents in write order, manifest last.
    pub fn files(&self, format: Format) -> Result<Vec<(String, String)>> {
        let mut files = Vec::new();
        for (name, table) in &self.tables {
            files.push((format!("{name}.{}", format.extension()), table.render(format)?));
        }
        for (name, doc) in &self.documents {
            files.push((format!("{name}.json"), serde_json::to_string_pretty(doc)? + "\n"));
        }
        files.push((
            format!("assertions.{}", format.extension()),
            self.assertion_table().render(format)?,
        ));
        let manifest = json!({
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "seed": self.seed,
            "format": format.extension(),
            "parameters": self.parameters,
            "files": files.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
            "assertions_passed": self.passed(),
        });
        files.push(("manifest.json".into(), serde_json::to_string_pretty(&manifest)? + "\n"));
        Ok(files)
    }

    pub fn write_dir(&self, dir: &Path, format: Format) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, content) in self.files(format)? {
            let path = dir.join(&name);
            fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }

    /// Tables and documents on `out`, each headed by its file name when
    /// there is more than one.
    pub fn write_stream(&self, out: &mut impl Write, format: Format) -> Result<()> {
        let files = self.files(format)?;
        let body: Vec<_> = files
            .iter()
            .filter(|(n, _)| n != "manifest.json" && !n.starts_with("assertions."))
            .collect();
        for (name, content) in &body {
            if body.len() > 1 {
                writeln!(out, "# {name}")?;
            }
            out.write_all(content.as_bytes())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_in_csv() {
        let mut t = Table::new(&["x", "name", "ok"]);
        t.push(row![0.1 + 0.2, "a,b", true]);
        t.push(row![1.0, Option::<f64>::None, false]);
        let csv = t.to_csv().unwrap();
        assert_eq!(csv, "x,name,ok\n0.30000000000000004,\"a,b\",true\n1.0,,false\n");
        let first: f64 = csv.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
        assert_eq!(first, 0.1 + 0.2);
    }

    #[test]
    fn json_keeps_column_order() {
        let mut t = Table::new(&["z", "a"]);
        t.push(row![1usize, f64::NAN]);
        let s = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(s, r#"[{"z":1,"a":null}]"#);
    }

    #[test]
    fn manifest_lists_files() {
        let mut r = Report::new("demo", Some(3), json!({"k": 1}));
        r.table("main", Table::new(&["a"]));
        r.assert("fine", true, "");
        let files = r.files(Format::Csv).unwrap();
        let names: Vec<_> = files.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["main.csv", "assertions.csv", "manifest.json"]);
        let manifest: Json = serde_json::from_str(&files[2].1).unwrap();
        assert_eq!(manifest["schema_version"], 1);
        assert_eq!(manifest["assertions_passed"], true);
    }
}
