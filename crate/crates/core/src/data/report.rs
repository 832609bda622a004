use std::path::Path;

use ndarray::Array2;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::{read_file, write_file};
use crate::error::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Every JSON report is wrapped as `{"schema": kind, "version": n, "data": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope<T> {
    pub schema: String,
    pub version: u32,
    pub data: T,
}

pub fn emit_report_json<T: Serialize>(
    schema: &str,
    data: &T,
    path: impl AsRef<Path>,
) -> Result<()> {
    let env = ReportEnvelope {
        schema: schema.to_string(),
        version: REPORT_SCHEMA_VERSION,
        data,
    };
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    write_file(path.as_ref(), text.as_bytes())
}

/// Reads a report, checking both the schema name and version.
pub fn read_report_json<T: DeserializeOwned>(schema: &str, path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let env: ReportEnvelope<serde_json::Value> =
        serde_json::from_slice(&read_file(path)?).map_err(|e| Error::parse(path, e.to_string()))?;
    if env.schema != schema {
        return Err(Error::parse(
            path,
            format!("schema {:?}, expected {schema:?}", env.schema),
        ));
    }
    if env.version != REPORT_SCHEMA_VERSION {
        return Err(Error::parse(
            path,
            format!(
                "schema version {}, expected {REPORT_SCHEMA_VERSION}",
                env.version
            ),
        ));
    }
    serde_json::from_value(env.data).map_err(|e| Error::parse(path, e.to_string()))
}

/// `bin_lo,bin_hi,count`, one row per bin.
pub fn render_histogram_csv(edges: &[f64], counts: &[u64]) -> Result<String> {
    if edges.len() != counts.len() + 1 {
        return Err(Error::input(format!(
            "{} edges for {} bins",
            edges.len(),
            counts.len()
        )));
    }
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for (i, c) in counts.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", edges[i], edges[i + 1], c));
    }
    Ok(out)
}

pub fn emit_histogram_csv(edges: &[f64], counts: &[u64], path: impl AsRef<Path>) -> Result<()> {
    write_file(
        path.as_ref(),
        render_histogram_csv(edges, counts)?.as_bytes(),
    )
}

/// Square matrix with a `class` header row and column.
pub fn render_matrix_csv(matrix: &Array2<f64>, classes: &[usize]) -> Result<String> {
    let (r, c) = matrix.dim();
    if r != c || r != classes.len() {
        return Err(Error::input(format!(
            "{r}x{c} matrix for {} classes",
            classes.len()
        )));
    }
    let mut out = String::from("class");
    for k in classes {
        out.push_str(&format!(",{k}"));
    }
    out.push('\n');
    for (k, row) in classes.iter().zip(matrix.rows()) {
        out.push_str(&k.to_string());
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn emit_matrix_csv(
    matrix: &Array2<f64>,
    classes: &[usize],
    path: impl AsRef<Path>,
) -> Result<()> {
    write_file(
        path.as_ref(),
        render_matrix_csv(matrix, classes)?.as_bytes(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn histogram_rows() {
        let csv = render_histogram_csv(&[0.0, 1.0, 2.0, 3.0], &[4, 0, 1]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines,
            vec!["bin_lo,bin_hi,count", "0,1,4", "1,2,0", "2,3,1"]
        );
        assert!(render_histogram_csv(&[0.0, 1.0], &[1, 2]).is_err());
    }

    #[test]
    fn symmetric_matrix_is_transpose_equal() {
        let m = array![[0.0, 1.5, 2.0], [1.5, 0.25, 3.0], [2.0, 3.0, 1.0]];
        let a = render_matrix_csv(&m, &[0, 1, 2]).unwrap();
        let b = render_matrix_csv(&m.t().to_owned(), &[0, 1, 2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lines().next(), Some("class,0,1,2"));
    }

    #[test]
    fn json_round_trip_and_schema_check() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        let data = vec![(1usize, 0.5f64), (2, 0.1 + 0.2)];
        emit_report_json("pairs", &data, &p).unwrap();
        let back: Vec<(usize, f64)> = read_report_json("pairs", &p).unwrap();
        assert_eq!(back, data);
        assert!(read_report_json::<Vec<(usize, f64)>>("other", &p).is_err());
    }
}
