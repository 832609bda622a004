use std::io::Read;
use std::path::Path;

use flate2::read::GzDecoder;
use ndarray::Array2;

use super::{read_file, LabeledVectors};
use crate::error::{Error, Result};
use crate::geometry::PointSet;

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

/// Loads an IDX image/label pair. Pixels are scaled to `[0, 1]` and each
/// image is flattened row-major. Gzip-compressed files are detected by
/// their magic bytes.
pub fn load_idx(images: impl AsRef<Path>, labels: impl AsRef<Path>) -> Result<LabeledVectors> {
    load_idx_subset(images, labels, None)
}

/// As [`load_idx`], keeping only the first `limit` records.
pub fn load_idx_subset(
    images: impl AsRef<Path>,
    labels: impl AsRef<Path>,
    limit: Option<usize>,
) -> Result<LabeledVectors> {
    let (ipath, lpath) = (images.as_ref(), labels.as_ref());
    let ibytes = inflate(ipath, read_file(ipath)?)?;
    let lbytes = inflate(lpath, read_file(lpath)?)?;

    let magic = be_u32(ipath, &ibytes, 0)?;
    if magic != IMAGES_MAGIC {
        return Err(Error::parse(
            ipath,
            format!("bad magic 0x{magic:08x} at offset 0 (expected 0x{IMAGES_MAGIC:08x})"),
        ));
    }
    let count = be_u32(ipath, &ibytes, 4)? as usize;
    let rows = be_u32(ipath, &ibytes, 8)? as usize;
    let cols = be_u32(ipath, &ibytes, 12)? as usize;
    let pixels = rows * cols;
    expect_len(ipath, &ibytes, 16 + count * pixels)?;

    let magic = be_u32(lpath, &lbytes, 0)?;
    if magic != LABELS_MAGIC {
        return Err(Error::parse(
            lpath,
            format!("bad magic 0x{magic:08x} at offset 0 (expected 0x{LABELS_MAGIC:08x})"),
        ));
    }
    let lcount = be_u32(lpath, &lbytes, 4)? as usize;
    expect_len(lpath, &lbytes, 8 + lcount)?;
    if lcount != count {
        return Err(Error::parse(
            lpath,
            format!("{lcount} labels for {count} images in {}", ipath.display()),
        ));
    }
    if pixels == 0 || count == 0 {
        return Err(Error::parse(ipath, "empty image file"));
    }

    let keep = limit.map_or(count, |k| k.min(count));
    let data: Vec<f64> = ibytes[16..16 + keep * pixels]
        .iter()
        .map(|&b| f64::from(b) / 255.0)
        .collect();
    let labels: Vec<usize> = lbytes[8..8 + keep]
        .iter()
        .map(|&b| usize::from(b))
        .collect();
    let vectors =
        PointSet::new(Array2::from_shape_vec((keep, pixels), data).expect("sized above"))?;
    LabeledVectors::new(vectors, labels)
}

fn inflate(path: &Path, bytes: Vec<u8>) -> Result<Vec<u8>> {
    if bytes.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(bytes.as_slice())
            .read_to_end(&mut out)
            .map_err(|e| Error::parse(path, format!("gzip: {e}")))?;
        Ok(out)
    } else {
        Ok(bytes)
    }
}

fn be_u32(path: &Path, bytes: &[u8], offset: usize) -> Result<u32> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes(b.try_into().expect("4 bytes")))
        .ok_or_else(|| {
            Error::parse(
                path,
                format!(
                    "truncated header: need {} bytes, found {}",
                    offset + 4,
                    bytes.len()
                ),
            )
        })
}

fn expect_len(path: &Path, bytes: &[u8], expected: usize) -> Result<()> {
    if bytes.len() < expected {
        return Err(Error::parse(
            path,
            format!(
                "truncated: expected {expected} bytes, found {}",
                bytes.len()
            ),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_pair(
        dir: &Path,
        images: &[u8],
        labels: &[u8],
    ) -> (std::path::PathBuf, std::path::PathBuf) {
        let ip = dir.join("img.idx");
        let lp = dir.join("lab.idx");
        std::fs::write(&ip, images).unwrap();
        std::fs::write(&lp, labels).unwrap();
        (ip, lp)
    }

    fn images(n: u32, magic: u32) -> Vec<u8> {
        let mut v = Vec::new();
        for x in [magic, n, 2, 2] {
            v.extend_from_slice(&x.to_be_bytes());
        }
        for i in 0..n * 4 {
            v.push((i * 17 % 256) as u8);
        }
        v
    }

    fn labels(n: u32) -> Vec<u8> {
        let mut v = Vec::new();
        v.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
        v.extend_from_slice(&n.to_be_bytes());
        v.extend((0..n).map(|i| (i % 10) as u8));
        v
    }

    #[test]
    fn parses_and_scales() {
        let dir = tempfile::tempdir().unwrap();
        let (ip, lp) = write_pair(dir.path(), &images(5, IMAGES_MAGIC), &labels(5));
        let data = load_idx(&ip, &lp).unwrap();
        assert_eq!((data.len(), data.dim()), (5, 4));
        assert_eq!(data.labels, vec![0, 1, 2, 3, 4]);
        assert_eq!(data.vectors.row(0)[1], 17.0 / 255.0);
        let head = load_idx_subset(&ip, &lp, Some(3)).unwrap();
        assert_eq!(head.len(), 3);
    }

    #[test]
    fn reads_gzip() {
        use flate2::{write::GzEncoder, Compression};
        use std::io::Write;
        let dir = tempfile::tempdir().unwrap();
        let mut enc = GzEncoder::new(Vec::new(), Compression::default());
        enc.write_all(&images(3, IMAGES_MAGIC)).unwrap();
        let (ip, lp) = write_pair(dir.path(), &enc.finish().unwrap(), &labels(3));
        assert_eq!(load_idx(&ip, &lp).unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_magic_truncation_and_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let (ip, lp) = write_pair(dir.path(), &images(3, 0x0000_0801), &labels(3));
        let err = load_idx(&ip, &lp).unwrap_err().to_string();
        assert!(
            err.contains("offset 0") && err.contains("0x00000801"),
            "{err}"
        );

        let mut short = images(3, IMAGES_MAGIC);
        short.truncate(20);
        let (ip, lp) = write_pair(dir.path(), &short, &labels(3));
        let err = load_idx(&ip, &lp).unwrap_err().to_string();
        assert!(err.contains("expected 28 bytes, found 20"), "{err}");

        let (ip, lp) = write_pair(dir.path(), &images(3, IMAGES_MAGIC), &labels(4));
        assert!(load_idx(&ip, &lp)
            .unwrap_err()
            .to_string()
            .contains("4 labels for 3 images"));
    }
}
