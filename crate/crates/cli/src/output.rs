//! Run manifests and atomic output files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::Failure;

/// Parameters of a run, written at the top of every output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub languages: Vec<String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    pub format: &'static str,
}

impl RunManifest {
    pub fn new(command: &'static str, format: &'static str) -> Self {
        Self {
            tool: "lexspider",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs: Vec::new(),
            languages: Vec::new(),
            seed: 0,
            epsilon: None,
            normalization: None,
            format,
        }
    }

    /// Comment line that opens every CSV file.
    pub fn csv_header(&self) -> String {
        format!("# manifest: {}\n", serde_json::to_string(self).expect("manifest serializes"))
    }
}

/// Structured document: manifest first, then the body's fields.
#[derive(Serialize)]
pub struct Document<'a, T: Serialize> {
    pub manifest: &'a RunManifest,
    pub format: &'static str,
    pub version: u32,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Document<'_, T> {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

/// CSV text with the manifest comment, a header row and LF line endings.
pub fn render_csv<I, R>(manifest: &RunManifest, header: &[String], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("write to Vec");
    for row in rows {
        w.write_record(row).expect("write to Vec");
    }
    let body = String::from_utf8(w.into_inner().expect("flush to Vec")).expect("UTF-8 fields");
    manifest.csv_header() + &body
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    let path = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Failure::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| Failure::io(&path, e))?;
    tmp.persist(&path).map_err(|e| Failure::io(&path, e.error))?;
    Ok(path)
}

/// Shortest round-trip text for a float.
pub fn num(x: f64) -> String {
    format!("{x}")
}
