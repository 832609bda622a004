//! AVEC binary vectors.
//!
//! ```text
//! offset  size      field
//! 0       4         magic "AVEC"
//! 4       4         u32 version (1)
//! 8       4         u32 n (rows)
//! 12      4         u32 d (columns)
//! 16      4         u32 has_labels (0 or 1)
//! 20      4·n·d     f32 features, row-major
//! ...     4·n       u32 labels, present iff has_labels == 1
//! ```
//!
//! All integers and floats are little-endian. Files without labels load
//! with every label set to 0.

use std::path::Path;

use ndarray::Array2;

use super::{read_file, write_file, LabeledVectors};
use crate::error::{Error, Result};
use crate::geometry::PointSet;

pub const AVEC_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"AVEC";
const HEADER: usize = 20;

pub fn encode_avec(data: &LabeledVectors, with_labels: bool) -> Result<Vec<u8>> {
    let n = u32::try_from(data.len()).map_err(|_| Error::input("too many rows for AVEC"))?;
    let d = u32::try_from(data.dim()).map_err(|_| Error::input("too many columns for AVEC"))?;
    let mut out = Vec::with_capacity(HEADER + 4 * data.len() * (data.dim() + 1));
    out.extend_from_slice(MAGIC);
    for x in [AVEC_VERSION, n, d, u32::from(with_labels)] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    for r in data.vectors.rows() {
        for &x in r {
            out.extend_from_slice(&(x as f32).to_le_bytes());
        }
    }
    if with_labels {
        for &l in &data.labels {
            let l = u32::try_from(l).map_err(|_| Error::input(format!("label {l} exceeds u32")))?;
            out.extend_from_slice(&l.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_avec(path: &Path, bytes: &[u8]) -> Result<LabeledVectors> {
    if bytes.len() < HEADER {
        return Err(Error::parse(
            path,
            format!(
                "truncated header: expected {HEADER} bytes, found {}",
                bytes.len()
            ),
        ));
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::parse(
            path,
            format!("bad magic {:?} at offset 0", &bytes[0..4]),
        ));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"));
    let version = word(4);
    if version != AVEC_VERSION {
        return Err(Error::parse(
            path,
            format!("unsupported version {version} at offset 4 (expected {AVEC_VERSION})"),
        ));
    }
    let (n, d, has_labels) = (word(8) as usize, word(12) as usize, word(16));
    if has_labels > 1 {
        return Err(Error::parse(
            path,
            format!("has_labels must be 0 or 1, got {has_labels}"),
        ));
    }
    let expected = HEADER + 4 * n * d + if has_labels == 1 { 4 * n } else { 0 };
    if bytes.len() != expected {
        let what = if bytes.len() < expected {
            "truncated"
        } else {
            "trailing data"
        };
        return Err(Error::parse(
            path,
            format!("{what}: expected {expected} bytes, found {}", bytes.len()),
        ));
    }
    let feats: Vec<f64> = bytes[HEADER..HEADER + 4 * n * d]
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes(c.try_into().expect("4 bytes"))))
        .collect();
    let labels: Vec<usize> = if has_labels == 1 {
        bytes[HEADER + 4 * n * d..]
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")) as usize)
            .collect()
    } else {
        vec![0; n]
    };
    let array = Array2::from_shape_vec((n, d), feats).expect("sized above");
    let vectors = PointSet::new(array).map_err(|e| Error::parse(path, e.to_string()))?;
    LabeledVectors::new(vectors, labels)
}

pub fn load_avec(path: impl AsRef<Path>) -> Result<LabeledVectors> {
    let path = path.as_ref();
    decode_avec(path, &read_file(path)?)
}

pub fn save_avec(data: &LabeledVectors, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &encode_avec(data, true)?)
}
