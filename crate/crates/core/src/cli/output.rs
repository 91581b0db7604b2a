//! CSV emission and run manifests.

use crate::media::ProfileSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// One CSV cell.
pub enum Cell<'a> {
    Float(f64),
    Int(i64),
    Text(&'a str),
}

impl From<f64> for Cell<'_> {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell<'_> {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl<'a> From<&'a str> for Cell<'a> {
    fn from(x: &'a str) -> Self {
        Cell::Text(x)
    }
}

/// CSV table with a single header row. Floats use 17 significant digits.
pub struct Csv {
    columns: usize,
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { columns: header.len(), text: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        assert_eq!(cells.len(), self.columns, "row width must match the header");
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            match c {
                Cell::Float(x) => write!(self.text, "{x:.16e}"),
                Cell::Int(n) => write!(self.text, "{n}"),
                Cell::Text(s) => write!(self.text, "{s}"),
            }
            .expect("writing to a String");
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub path: PathBuf,
    pub sha256: String,
    pub bytes: usize,
}

impl Artifact {
    pub fn of(path: &Path, contents: &[u8]) -> Self {
        Artifact { path: path.to_path_buf(), sha256: hex::encode(Sha256::digest(contents)), bytes: contents.len() }
    }
}

/// Sidecar written next to every output file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub argv: Vec<String>,
    pub config: ProfileSpec,
    /// Every tolerance and parameter the run used, defaults included.
    pub settings: serde_json::Value,
    pub threads: usize,
    pub duration_seconds: f64,
    pub artifacts: Vec<Artifact>,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
