//! Artifact writing and the run manifest.
//!
//! Every command writes its outputs into one directory and finishes with a
//! `manifest.json` listing the command, the seed, the fully resolved
//! configuration, and a SHA-256 checksum of every input and output file.
//! Nothing time- or host-dependent is recorded, so a rerun with the same
//! configuration reproduces every artifact bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::{io_error, Result};

/// Checksum record of one file touched by a run.
#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    /// Path relative to the output directory (outputs) or as given (inputs).
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// The `manifest.json` document.
#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    /// The fully resolved configuration the run used.
    config: &'a ExperimentConfig,
    inputs: &'a [FileRecord],
    outputs: &'a [FileRecord],
}

/// Collects artifacts for one run and writes the manifest last.
pub struct ArtifactSet {
    dir: PathBuf,
    inputs: Vec<FileRecord>,
    outputs: Vec<FileRecord>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl ArtifactSet {
    /// Create the output directory (if needed) and an empty set.
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        })
    }

    /// Record an input file (configuration, interaction source) by checksum.
    pub fn record_input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
        self.inputs.push(FileRecord {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    /// Write one output file and record its checksum.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| io_error(&path, e))?;
        self.outputs.push(FileRecord {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    /// Serialize a document as pretty JSON and write it.
    pub fn write_json<T: Serialize>(&mut self, name: &str, doc: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(doc)
            .map_err(|e| crate::error::runtime(format!("serializing {name}: {e}")))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Write the manifest. Call once, after every other artifact.
    pub fn finish(mut self, cfg: &ExperimentConfig) -> Result<()> {
        let manifest = Manifest {
            tool: "phaseclust",
            version: env!("CARGO_PKG_VERSION"),
            command: cfg.command.name(),
            seed: cfg.seed,
            config: cfg,
            inputs: &self.inputs,
            outputs: &self.outputs,
        };
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| crate::error::runtime(format!("serializing manifest: {e}")))?;
        text.push('\n');
        let path = self.dir.join("manifest.json");
        fs::write(&path, text.as_bytes()).map_err(|e| io_error(&path, e))?;
        self.outputs.clear();
        Ok(())
    }
}

/// Incremental CSV builder: a seed comment, a header, then rows.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(seed: u64, header: &str) -> Self {
        let mut text = format!("# seed = {seed}\n");
        text.push_str(header);
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, fields: std::fmt::Arguments<'_>) {
        use std::fmt::Write;
        writeln!(self.text, "{fields}").expect("string write cannot fail");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

/// Render a list of intervals as `"[a, b] [c, d]"` for CSV cells.
pub fn interval_cell(intervals: &[(f64, f64)]) -> String {
    if intervals.is_empty() {
        return "-".to_string();
    }
    intervals
        .iter()
        .map(|(a, b)| format!("[{a:.4}, {b:.4}]"))
        .collect::<Vec<_>>()
        .join(" ")
}
