use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use minkgh_core::Error;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_path_to_error::Segment;

/// Bumped on breaking changes of any artifact.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Rejected input; exit status 2.
    Validation { message: String, pointer: Option<String> },
    /// Algorithm failure on valid input; exit status 3.
    Numerical(String),
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError::Validation { message: message.into(), pointer: None }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Validation { message, pointer } => serde_json::json!({ "error": "validation", "message": message, "pointer": pointer }),
            CliError::Numerical(message) => serde_json::json!({ "error": "numerical", "message": message }),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::validation(e.to_string())
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } | Segment::Enum { variant: key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))
}

/// Parses JSON, reporting schema violations with a JSON pointer.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Validation {
        message: format!("{what}: {}", e.inner()),
        pointer: Some(pointer(e.path())),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    parse_json(&read_text(path)?, &path.display().to_string())
}

/// Numeric CSV rows, skipping a header line if it does not parse.
pub fn read_csv_rows(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_path(path).map_err(|e| CliError::validation(e.to_string()))?;
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::validation(e.to_string()))?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(r) => rows.push(r),
            Err(_) if i == 0 => {}
            Err(e) => return Err(CliError::validation(format!("{}: line {}: {e}", path.display(), i + 1))),
        }
    }
    Ok(rows)
}

/// CSV artifact: header and numeric rows.
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, header: Vec<String>) -> Self {
        Table { name: name.into(), header, rows: Vec::new() }
    }

    fn write(&self, path: &Path) -> CliResult<()> {
        let io = |e: csv::Error| CliError::validation(format!("cannot write {}: {e}", path.display()));
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| format!("{v:e}"))).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::validation(e.to_string()))
    }
}

/// Run header embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunHeader {
    pub schema_version: u32,
    pub command: String,
    pub tol: f64,
    pub maxlen: Option<usize>,
    pub seed: u64,
    pub dim: Option<usize>,
    pub inputs: Vec<String>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    #[serde(flatten)]
    header: &'a RunHeader,
    result: &'a T,
    artifacts: Vec<String>,
}

/// Writes the report (stdout, or `out/report.json`) and the CSV tables into `out`.
pub fn emit<T: Serialize>(header: &RunHeader, result: &T, tables: &[Table], out: Option<&PathBuf>) -> CliResult<()> {
    let artifacts: Vec<String> = if out.is_some() { tables.iter().map(|t| format!("{}.csv", t.name)).collect() } else { Vec::new() };
    let text = serde_json::to_string_pretty(&Envelope { header, result, artifacts }).map_err(|e| CliError::Numerical(e.to_string()))?;
    match out {
        None => {
            let written = writeln!(std::io::stdout().lock(), "{text}");
            if let Err(e) = written {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(CliError::validation(format!("cannot write the report: {e}")));
                }
            }
        }
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::validation(format!("cannot create {}: {e}", dir.display())))?;
            fs::write(dir.join("report.json"), text + "\n").map_err(|e| CliError::validation(e.to_string()))?;
            for t in tables {
                t.write(&dir.join(format!("{}.csv", t.name)))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointer_of_nested_error() {
        #[derive(serde::Deserialize, Debug)]
        struct Inner {
            #[allow(dead_code)]
            s: f64,
        }
        #[derive(serde::Deserialize, Debug)]
        struct Outer {
            #[allow(dead_code)]
            planes: Vec<Inner>,
        }
        let err = parse_json::<Outer>(r#"{"planes": [{"s": 1.0}, {"s": "x"}]}"#, "test").unwrap_err();
        match err {
            CliError::Validation { pointer, .. } => assert_eq!(pointer.as_deref(), Some("/planes/1/s")),
            other => panic!("{other:?}"),
        }
    }
}
