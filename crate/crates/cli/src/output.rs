//! Result documents: JSON with an embedded run manifest, or CSV with a
//! sidecar `<file>.manifest.json`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub schema_version: String,
    pub threads: usize,
    pub timestamp: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, parameters: Value, seed: Option<u64>, threads: usize) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            parameters,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            schema_version: SCHEMA_VERSION.to_string(),
            threads,
            timestamp: chrono::Utc::now().to_rfc3339(),
            outputs: Vec::new(),
        }
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    manifest: &'a RunManifest,
    result: &'a T,
}

pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn create(path: &Path) -> std::io::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_json<T: Serialize>(path: &Path, manifest: &RunManifest, result: &T) -> std::io::Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, &Document { manifest, result })?;
    writeln!(out)?;
    out.flush()
}

pub fn write_manifest(path: &Path, manifest: &RunManifest) -> std::io::Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, manifest)?;
    writeln!(out)?;
    out.flush()
}

/// Writes a CSV file with a fixed header row followed by `rows`.
pub fn write_csv<R: Serialize>(path: &Path, header: &[&str], rows: &[R]) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(create(path)?);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}
