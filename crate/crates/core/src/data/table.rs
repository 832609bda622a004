use std::path::Path;

use super::{write_file, LabeledVectors};
use crate::error::{Error, Result};
use crate::geometry::PointSet;

/// Reads a CSV with a header row. The column named `label` holds
/// nonnegative integer classes; every other column is a numeric feature.
pub fn load_csv(path: impl AsRef<Path>) -> Result<LabeledVectors> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(path, format!("header: {e}")))?
        .clone();
    let label_col = headers
        .iter()
        .position(|h| h.trim() == "label")
        .ok_or_else(|| Error::parse(path, "missing \"label\" column"))?;
    let feature_cols: Vec<usize> = (0..headers.len()).filter(|&c| c != label_col).collect();
    if feature_cols.is_empty() {
        return Err(Error::parse(path, "no feature columns"));
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        // data rows start on line 2
        let line = i + 2;
        let record = record.map_err(|e| Error::parse(path, format!("line {line}: {e}")))?;
        let cell = |c: usize| record.get(c).unwrap_or("").trim();
        let label = cell(label_col).parse::<usize>().map_err(|_| {
            Error::parse(
                path,
                format!(
                    "line {line}, column \"label\": not a class id: {:?}",
                    cell(label_col)
                ),
            )
        })?;
        let mut row = Vec::with_capacity(feature_cols.len());
        for &c in &feature_cols {
            let v = cell(c)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    Error::parse(
                        path,
                        format!(
                            "line {line}, column {:?}: not a number: {:?}",
                            &headers[c],
                            cell(c)
                        ),
                    )
                })?;
            row.push(v);
        }
        rows.push(row);
        labels.push(label);
    }
    if rows.is_empty() {
        return Err(Error::parse(path, "no data rows"));
    }
    let vectors = PointSet::from_rows(&rows).map_err(|e| Error::parse(path, e.to_string()))?;
    LabeledVectors::new(vectors, labels)
}

/// Writes `label,f0,f1,...` with shortest round-trip float formatting.
pub fn save_csv(data: &LabeledVectors, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("label");
    for j in 0..data.dim() {
        out.push_str(&format!(",f{j}"));
    }
    out.push('\n');
    for (r, l) in data.vectors.rows().zip(&data.labels) {
        out.push_str(&l.to_string());
        for x in r {
            out.push(',');
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    write_file(path.as_ref(), out.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        std::fs::write(&p, "label,f0,f1\n0,0.0,1.0\n1,2.0,3.0\n").unwrap();
        let data = load_csv(&p).unwrap();
        assert_eq!(data.labels, vec![0, 1]);
        assert_eq!(data.vectors.row(1), &[2.0, 3.0]);
    }

    #[test]
    fn label_column_may_be_anywhere() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        std::fs::write(&p, "x,y,label\n1,2,5\n").unwrap();
        let data = load_csv(&p).unwrap();
        assert_eq!((data.labels[0], data.vectors.row(0)), (5, &[1.0, 2.0][..]));
    }

    #[test]
    fn errors_name_position() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        std::fs::write(&p, "f0,f1\n0,1\n").unwrap();
        assert!(load_csv(&p)
            .unwrap_err()
            .to_string()
            .contains("missing \"label\""));
        std::fs::write(&p, "label,f0,f1\n0,1,2\n1,abc,2\n").unwrap();
        let err = load_csv(&p).unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("\"f0\""), "{err}");
        std::fs::write(&p, "label,f0\n-1,2\n").unwrap();
        assert!(load_csv(&p).unwrap_err().to_string().contains("class id"));
    }
}
