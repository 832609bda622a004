//! Datasets, on-disk formats and report emission.
//!
//! Formats:
//! - IDX (MNIST), big-endian, optionally gzip-compressed;
//! - AVEC, a little-endian binary vector file (see [`avec`]);
//! - CSV with a header and an integer `label` column;
//! - versioned JSON report envelopes, CSV tables and SVG scatter plots.

mod avec;
mod idx;
mod report;
mod svg;
mod table;
mod toy;

pub use avec::{decode_avec, encode_avec, load_avec, save_avec, AVEC_VERSION};
pub use idx::{load_idx, load_idx_subset};
pub use report::{
    emit_histogram_csv, emit_matrix_csv, emit_report_json, read_report_json, render_histogram_csv,
    render_matrix_csv, ReportEnvelope, REPORT_SCHEMA_VERSION,
};
pub use svg::{emit_hull_svg, render_hull_svg, Overlay};
pub use table::{load_csv, save_csv};
pub use toy::{gen_toy, ToyKind, ToySpec};

use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::PointSet;

/// A labeled set of vectors. Labels are dense class ids `0..n_classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledVectors {
    pub vectors: PointSet,
    pub labels: Vec<usize>,
    pub class_names: Option<Vec<String>>,
}

impl LabeledVectors {
    pub fn new(vectors: PointSet, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != vectors.n() {
            return Err(Error::input(format!(
                "{} labels for {} vectors",
                labels.len(),
                vectors.n()
            )));
        }
        Ok(Self {
            vectors,
            labels,
            class_names: None,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.dim()
    }

    /// One past the largest label.
    pub fn n_classes(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Distinct labels present, ascending.
    pub fn classes(&self) -> Vec<usize> {
        let mut c = self.labels.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    pub fn class_indices(&self, class: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Ok(Self {
            vectors: self.vectors.select(indices)?,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
        })
    }

    /// The first `k` rows (all rows if `k ≥ len`).
    pub fn head(&self, k: usize) -> Result<Self> {
        let idx: Vec<usize> = (0..k.min(self.len())).collect();
        self.subset(&idx)
    }
}

/// Loads `.csv` or `.avec` by extension.
pub fn load_vectors(path: impl AsRef<Path>) -> Result<LabeledVectors> {
    let path = path.as_ref();
    match extension(path).as_deref() {
        Some("csv") => load_csv(path),
        Some("avec") => load_avec(path),
        _ => Err(Error::parse(
            path,
            "unknown vector file type (expected .csv or .avec)",
        )),
    }
}

/// Saves `.csv` or `.avec` by extension.
pub fn save_vectors(data: &LabeledVectors, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    match extension(path).as_deref() {
        Some("csv") => save_csv(data, path),
        Some("avec") => save_avec(data, path),
        _ => Err(Error::parse(
            path,
            "unknown vector file type (expected .csv or .avec)",
        )),
    }
}

fn extension(path: &Path) -> Option<String> {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
}

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
