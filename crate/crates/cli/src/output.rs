//! Output files of a run and the manifest that inventories them.
//!
//! Reals are written with Rust's shortest round-trip formatting, so parsing
//! a CSV cell recovers the exact `f64`. Every file is hashed as written.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value as Json;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.jsonl";

/// One emitted file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Collects the files of one run inside the output directory.
#[derive(Debug)]
pub struct Artifacts {
    dir: PathBuf,
    csv: bool,
    jsonl: bool,
    files: Vec<FileRecord>,
}

impl Artifacts {
    /// Creates the output directory.
    pub fn create(config: &RunConfig) -> Result<Self, CliError> {
        let dir = config.output.directory.clone();
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Self { dir, csv: config.output.csv, jsonl: config.output.jsonl, files: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[FileRecord] {
        &self.files
    }

    /// Writes a CSV table of reals; skipped when CSV output is disabled.
    pub fn write_csv<const N: usize>(
        &mut self,
        name: &str,
        header: [&str; N],
        rows: impl IntoIterator<Item = [f64; N]>,
    ) -> Result<(), CliError> {
        if !self.csv {
            return Ok(());
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::io(name, e.into_error()))?;
        self.write_bytes(name, &bytes)
    }

    /// Writes one JSON record per line; skipped when JSON-lines output is
    /// disabled.
    pub fn write_jsonl(&mut self, name: &str, records: &[Json]) -> Result<(), CliError> {
        if !self.jsonl {
            return Ok(());
        }
        let mut text = String::new();
        for r in records {
            text.push_str(&r.to_string());
            text.push('\n');
        }
        self.write_bytes(name, text.as_bytes())
    }

    fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.files.push(FileRecord {
            path: name.to_string(),
            bytes: bytes.len() as u64,
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Record written to `manifest.jsonl` at the end of every run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub artifact: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Json,
    pub started_at: String,
    pub finished_at: String,
    pub wall_seconds: f64,
    pub status: String,
    pub exit_code: i32,
    pub files: Vec<FileRecord>,
}

impl RunManifest {
    /// Writes the manifest as a single JSON line, replacing any earlier one.
    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(MANIFEST_FILE);
        let mut line = serde_json::to_string(self).expect("manifest serializes");
        line.push('\n');
        fs::write(&path, line).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

/// Reads the manifest of a finished run.
pub fn read_manifest(dir: &Path) -> Result<Json, CliError> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let line = text.lines().next().unwrap_or_default();
    serde_json::from_str(line).map_err(|e| CliError::io(&path, e.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn reals_round_trip_through_text() {
        for v in [0.1f64, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(v.to_string().parse::<f64>().unwrap(), v);
        }
    }
}
