//! MLPC network checkpoints.
//!
//! ```text
//! "MLPC" | u32 version | u32 L (affine layers) | (L + 1) × u32 dims
//! then per layer: out·in f64 weights ([out][in] row-major), out f64 biases
//! ```
//!
//! Little-endian throughout. `dims` is `[input, hidden..., classes]`.

use std::path::Path;

use ndarray::{Array1, Array2};

use super::{Dense, Mlp};
use crate::data::{read_file, write_file};
use crate::error::{Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"MLPC";

pub fn encode_checkpoint(model: &Mlp) -> Vec<u8> {
    let dims = model.dims();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    out.extend_from_slice(&(model.layers().len() as u32).to_le_bytes());
    for d in dims {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for l in model.layers() {
        for &w in l.weights.iter() {
            out.extend_from_slice(&w.to_le_bytes());
        }
        for &b in l.bias.iter() {
            out.extend_from_slice(&b.to_le_bytes());
        }
    }
    out
}

struct Cursor<'a> {
    path: &'a Path,
    bytes: &'a [u8],
    at: usize,
}

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        let end = self.at + n;
        if end > self.bytes.len() {
            return Err(Error::parse(
                self.path,
                format!(
                    "truncated at offset {}: need {end} bytes, found {}",
                    self.at,
                    self.bytes.len()
                ),
            ));
        }
        let s = &self.bytes[self.at..end];
        self.at = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        Ok(self
            .take(8 * n)?
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }
}

pub fn decode_checkpoint(path: &Path, bytes: &[u8]) -> Result<Mlp> {
    let mut c = Cursor { path, bytes, at: 0 };
    if c.take(4)? != MAGIC {
        return Err(Error::parse(
            path,
            "bad magic at offset 0 (expected \"MLPC\")",
        ));
    }
    let version = c.u32()?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::parse(
            path,
            format!("unsupported version {version} at offset 4 (expected {CHECKPOINT_VERSION})"),
        ));
    }
    let count = c.u32()? as usize;
    if !(2..=1024).contains(&count) {
        return Err(Error::parse(
            path,
            format!("implausible layer count {count}"),
        ));
    }
    let dims: Vec<usize> = (0..=count)
        .map(|_| c.u32().map(|d| d as usize))
        .collect::<Result<_>>()?;
    let mut layers = Vec::with_capacity(count);
    for w in dims.windows(2) {
        let (inp, out) = (w[0], w[1]);
        let weights = Array2::from_shape_vec((out, inp), c.f64s(out * inp)?).expect("sized");
        let bias = Array1::from(c.f64s(out)?);
        layers.push(Dense { weights, bias });
    }
    if c.at != bytes.len() {
        return Err(Error::parse(
            path,
            format!(
                "trailing data: expected {} bytes, found {}",
                c.at,
                bytes.len()
            ),
        ));
    }
    Mlp::from_layers(layers).map_err(|e| Error::parse(path, e.to_string()))
}

pub fn save_checkpoint(model: &Mlp, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &encode_checkpoint(model))
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<Mlp> {
    let path = path.as_ref();
    decode_checkpoint(path, &read_file(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let model = Mlp::new(5, &[4, 3], 2, 9).unwrap();
        let bytes = encode_checkpoint(&model);
        assert_eq!(&bytes[..4], b"MLPC");
        assert_eq!(
            bytes.len(),
            4 + 4 + 4 + 4 * 4 + 8 * (5 * 4 + 4 + 4 * 3 + 3 + 3 * 2 + 2)
        );
        assert_eq!(decode_checkpoint(Path::new("m"), &bytes).unwrap(), model);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let bytes = encode_checkpoint(&Mlp::new(2, &[2], 2, 0).unwrap());
        let p = Path::new("m.mlpc");
        assert!(decode_checkpoint(p, &bytes[..bytes.len() - 1])
            .unwrap_err()
            .to_string()
            .contains("truncated"));
        let mut extra = bytes.clone();
        extra.push(1);
        assert!(decode_checkpoint(p, &extra)
            .unwrap_err()
            .to_string()
            .contains("trailing"));
        let mut bad = bytes;
        bad[0] = b'X';
        assert!(decode_checkpoint(p, &bad)
            .unwrap_err()
            .to_string()
            .contains("magic"));
    }
}
