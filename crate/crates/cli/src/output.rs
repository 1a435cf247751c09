//! Atomic output files and the run manifest.
//!
//! Every run ends with a `manifest.json` listing each emitted file with its
//! SHA-256 checksum. The manifest is written last so its inventory covers
//! everything else, and files are written through a temporary name plus
//! rename so a crashed run never leaves a half-written artifact behind.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct FileDigest {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// What a run read, what it was asked to do, and what it wrote. Contains no
/// timestamps or machine state: the same invocation on the same input
/// produces the same manifest bytes.
#[derive(Serialize)]
struct RunManifest {
    command: &'static str,
    parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<FileDigest>,
    outputs: Vec<FileDigest>,
}

pub fn digest(name: impl Into<String>, bytes: &[u8]) -> FileDigest {
    FileDigest {
        file: name.into(),
        sha256: hex::encode(Sha256::digest(bytes)),
        bytes: bytes.len() as u64,
    }
}

fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<()> {
    let mut tmp = tempfile::Builder::new()
        .prefix(".tmp.")
        .tempfile_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(dir.join(name))
        .with_context(|| format!("writing {}", dir.join(name).display()))?;
    Ok(())
}

/// Writes every `(name, contents)` pair into `out_dir`, then the manifest.
pub fn write_run(
    out_dir: &Path,
    command: &'static str,
    parameters: serde_json::Value,
    input: Option<FileDigest>,
    files: &[(String, String)],
) -> Result<()> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let mut outputs: Vec<FileDigest> = files
        .iter()
        .map(|(name, contents)| digest(name.clone(), contents.as_bytes()))
        .collect();
    for (name, contents) in files {
        write_atomic(out_dir, name, contents.as_bytes())?;
    }
    outputs.sort_by(|a, b| a.file.cmp(&b.file));
    let manifest = RunManifest {
        command,
        parameters,
        input,
        outputs,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    write_atomic(out_dir, "manifest.json", json.as_bytes())
}
