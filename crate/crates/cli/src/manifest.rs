use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// What a command read and wrote, for the run manifest.
#[derive(Debug, Default)]
pub struct Run {
    pub seed: Option<u64>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct FileHash {
    pub path: PathBuf,
    pub sha256: String,
}

/// One per invocation, written next to the primary output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub threads: usize,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
    pub wall_time_secs: f64,
}

/// SHA-256 of a file, or of a directory's files in name order.
pub fn hash_path(path: &Path) -> Result<String> {
    let mut h = Sha256::new();
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = fs::read_dir(path)
            .with_context(|| format!("listing {}", path.display()))?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()
            .with_context(|| format!("listing {}", path.display()))?;
        entries.sort();
        for e in entries.iter().filter(|e| e.is_file()) {
            // manifests carry wall time and are not part of the content
            if e.file_name().is_some_and(|n| n == "manifest.json") {
                continue;
            }
            h.update(e.file_name().unwrap_or_default().as_encoded_bytes());
            h.update(fs::read(e).with_context(|| format!("reading {}", e.display()))?);
        }
    } else {
        h.update(fs::read(path).with_context(|| format!("reading {}", path.display()))?);
    }
    Ok(hex::encode(h.finalize()))
}

/// `<out>.manifest.json` for a file output, `<out>/manifest.json` for a directory.
pub fn manifest_path(primary: &Path) -> PathBuf {
    if primary.is_dir() {
        primary.join("manifest.json")
    } else {
        let mut name = primary.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        primary.with_file_name(name)
    }
}

pub fn hash_all(paths: &[PathBuf]) -> Result<Vec<FileHash>> {
    paths
        .iter()
        .map(|p| {
            Ok(FileHash {
                path: p.clone(),
                sha256: hash_path(p)?,
            })
        })
        .collect()
}

pub fn write_manifest(m: &RunManifest) -> Result<PathBuf> {
    let primary = &m
        .outputs
        .first()
        .context("command produced no outputs")?
        .path;
    let path = manifest_path(primary);
    let text = serde_json::to_string_pretty(m)?;
    fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
