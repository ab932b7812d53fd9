//! Tabular artifacts and their metadata sidecars.
//!
//! CSV files use a comma separator, `.` decimals, a mandatory header row
//! and LF line endings. Floats are written in shortest round-trip form.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

/// Git-style version string of this build.
pub const VERSION: &str = env!("CIRC_SPECTRA_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
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

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn push_number(out: &mut String, x: f64) {
    // Both forms are shortest round-trip; Debug switches to exponent
    // notation for very large or small magnitudes.
    if x.fract() == 0.0 && x.abs() < 1e15 {
        write!(out, "{x}").expect("write to string");
    } else {
        write!(out, "{x:?}").expect("write to string");
    }
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, &x) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                push_number(&mut out, x);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            columns: &'a [String],
            rows: &'a [Vec<f64>],
        }
        let mut s = serde_json::to_string(&Doc {
            columns: &self.columns,
            rows: &self.rows,
        })
        .expect("table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Parse a CSV table with a header row. Blank lines are skipped.
    pub fn parse_csv(text: &str) -> std::result::Result<Table, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or("missing header row")?;
        let mut table = Table::new(header.split(',').map(|c| c.trim().to_owned()));
        for (i, line) in lines.enumerate() {
            let row: std::result::Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
            let row = row.map_err(|e| format!("data row {}: {e}", i + 1))?;
            if row.len() != table.columns.len() {
                return Err(format!(
                    "data row {} has {} fields, header has {}",
                    i + 1,
                    row.len(),
                    table.columns.len()
                ));
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.columns.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }
}

/// One file to be written.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(name: impl Into<String>, contents: impl Into<String>) -> Self {
        Artifact {
            name: name.into(),
            contents: contents.into(),
        }
    }
}

/// Sidecar metadata written next to every artifact as `<name>.meta.json`.
#[derive(Debug, Serialize)]
pub struct Sidecar<'a, C: Serialize> {
    pub artifact: &'a str,
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'a str,
    pub seed: u64,
    pub params_hash: Option<&'a str>,
    pub config: &'a C,
    pub created_unix: u64,
}

pub fn sidecar_name(artifact: &str) -> String {
    format!("{artifact}.meta.json")
}

/// Write `artifacts` into `dir` with one sidecar each. Every target is
/// checked before anything is written, so a refused run leaves no partial
/// output.
pub fn write_artifacts<C: Serialize>(
    dir: &Path,
    force: bool,
    artifacts: &[Artifact],
    subcommand: &str,
    seed: u64,
    params_hash: Option<&str>,
    config: &C,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let targets: Vec<(PathBuf, PathBuf)> = artifacts
        .iter()
        .map(|a| (dir.join(&a.name), dir.join(sidecar_name(&a.name))))
        .collect();
    if !force {
        for (data, meta) in &targets {
            for p in [data, meta] {
                if p.exists() {
                    return Err(CliError::Exists(p.clone()));
                }
            }
        }
    }
    let created_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut written = Vec::new();
    for (a, (data, meta)) in artifacts.iter().zip(&targets) {
        write_file(data, a.contents.as_bytes())?;
        let sidecar = Sidecar {
            artifact: &a.name,
            tool: "circ-spectra",
            version: VERSION,
            subcommand,
            seed,
            params_hash,
            config,
            created_unix,
        };
        let mut text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
        text.push('\n');
        write_file(meta, text.as_bytes())?;
        written.push(data.clone());
    }
    Ok(written)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(bytes).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(["x", "density"]);
        t.push(vec![0.1, 1e-300]);
        t.push(vec![-2.0, 12345678.9]);
        let text = t.to_csv();
        assert_eq!(text, "x,density\n0.1,1e-300\n-2,12345678.9\n");
        assert_eq!(Table::parse_csv(&text).unwrap(), t);
    }

    #[test]
    fn parse_errors() {
        assert!(Table::parse_csv("").is_err());
        assert!(Table::parse_csv("a,b\n1,2,3\n").is_err());
        assert!(Table::parse_csv("a\nfoo\n").is_err());
    }

    #[test]
    fn refuses_to_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        let arts = [Artifact::new("a.csv", "x\n1.0\n")];
        write_artifacts(dir.path(), false, &arts, "law", 0, None, &()).unwrap();
        let err = write_artifacts(dir.path(), false, &arts, "law", 0, None, &()).unwrap_err();
        assert!(matches!(err, CliError::Exists(_)));
        write_artifacts(dir.path(), true, &arts, "law", 0, None, &()).unwrap();
        let meta = std::fs::read_to_string(dir.path().join("a.csv.meta.json")).unwrap();
        assert!(meta.contains("\"seed\": 0"));
    }
}
