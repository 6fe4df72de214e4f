//! Text formats for matrices, label vectors and dataset manifests.
//!
//! * Matrix: comma-separated decimal floats, one matrix row per line, LF
//!   endings, no header. Columns are data points. Written with 17
//!   significant digits so values round-trip exactly.
//! * Labels: one nonnegative integer per line, remapped on load to
//!   contiguous ids in order of first appearance.
//! * Manifest: one entry per line with tab-separated fields
//!   `matrix_path  labels_path  L  r_min  r_max  category`. Blank lines and
//!   lines starting with `#` are skipped. Relative paths resolve against
//!   the manifest's directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::spectral::LabelVector;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn parse_matrix(text: &str, path: &Path) -> Result<DenseMatrix> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut count = 0;
        for token in line.split(',') {
            let token = token.trim();
            let value: f64 = token
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("not a number: {token:?}")))?;
            if !value.is_finite() {
                return Err(parse_err(path, line_no, format!("non-finite value {token:?}")));
            }
            data.push(value);
            count += 1;
        }
        match cols {
            None => cols = Some(count),
            Some(c) if c != count => {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected {c} values, found {count}"),
                ))
            }
            Some(_) => {}
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| parse_err(path, 1, "empty matrix file"))?;
    DenseMatrix::new(rows, cols, data)
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    parse_matrix(&read(path)?, path)
}

/// Canonical text form of a matrix.
pub fn format_matrix(x: &DenseMatrix) -> String {
    let mut out = String::with_capacity(x.rows() * x.cols() * 24);
    for i in 0..x.rows() {
        for (j, v) in x.row(i).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v:.16e}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn save_matrix(path: impl AsRef<Path>, x: &DenseMatrix) -> Result<()> {
    write(path.as_ref(), &format_matrix(x))
}

pub fn parse_labels(text: &str, path: &Path) -> Result<LabelVector> {
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let token = line.trim();
        if token.is_empty() {
            continue;
        }
        let id: usize = token
            .parse()
            .map_err(|_| parse_err(path, idx + 1, format!("not a nonnegative integer: {token:?}")))?;
        raw.push(id);
    }
    if raw.is_empty() {
        return Err(parse_err(path, 1, "empty label file"));
    }
    Ok(LabelVector::contiguous(&raw))
}

pub fn load_labels(path: impl AsRef<Path>) -> Result<LabelVector> {
    let path = path.as_ref();
    parse_labels(&read(path)?, path)
}

pub fn format_labels(labels: &LabelVector) -> String {
    let mut out = String::with_capacity(labels.len() * 3);
    for l in labels.as_slice() {
        writeln!(out, "{l}").expect("writing to a String");
    }
    out
}

pub fn save_labels(path: impl AsRef<Path>, labels: &LabelVector) -> Result<()> {
    write(path.as_ref(), &format_labels(labels))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestEntry {
    pub matrix_path: PathBuf,
    pub labels_path: PathBuf,
    pub clusters: usize,
    pub r_min: usize,
    pub r_max: usize,
    pub category: String,
}

impl ManifestEntry {
    pub fn load(&self) -> Result<(DenseMatrix, LabelVector)> {
        let data = load_matrix(&self.matrix_path)?;
        let labels = load_labels(&self.labels_path)?;
        if labels.len() != data.cols() {
            return Err(Error::Dimension(format!(
                "{}: {} labels for {} columns",
                self.labels_path.display(),
                labels.len(),
                data.cols()
            )));
        }
        Ok((data, labels))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn parse_manifest(text: &str, path: &Path, base: &Path) -> Result<DatasetManifest> {
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(parse_err(
                path,
                line_no,
                format!("expected 6 tab-separated fields, found {}", fields.len()),
            ));
        }
        let count = |i: usize, name: &str| -> Result<usize> {
            fields[i]
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("{name} is not a count: {:?}", fields[i])))
        };
        let clusters = count(2, "L")?;
        let r_min = count(3, "r_min")?;
        let r_max = count(4, "r_max")?;
        if clusters == 0 {
            return Err(parse_err(path, line_no, "L must be at least 1"));
        }
        if r_min == 0 || r_min > r_max {
            return Err(parse_err(
                path,
                line_no,
                format!("rank bounds {r_min}..{r_max} are invalid"),
            ));
        }
        let resolve = |p: &str| {
            let p = Path::new(p);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };
        let matrix_path = resolve(fields[0]);
        let labels_path = resolve(fields[1]);
        for p in [&matrix_path, &labels_path] {
            if !p.is_file() {
                return Err(Error::MissingFile(p.clone()));
            }
        }
        entries.push(ManifestEntry {
            matrix_path,
            labels_path,
            clusters,
            r_min,
            r_max,
            category: fields[5].to_string(),
        });
    }
    Ok(DatasetManifest { entries })
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_manifest(&read(path)?, path, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("mem")
    }

    #[test]
    fn parses_simple_matrix() {
        let x = parse_matrix("1,2\n3,4\n", p()).unwrap();
        assert_eq!(x, DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap());
    }

    #[test]
    fn ragged_row_names_line() {
        match parse_matrix("1,2\n3\n", p()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_tokens_and_empty() {
        assert!(matches!(
            parse_matrix("1,x\n", p()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_matrix("1,2\nnan,2\n", p()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_matrix("", p()), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_text_round_trips() {
        let x = DenseMatrix::from_rows(&[[0.1, -2.5e-300], [1.0 / 3.0, 12345.678]]).unwrap();
        let text = format_matrix(&x);
        let y = parse_matrix(&text, p()).unwrap();
        assert_eq!(x, y);
        assert_eq!(format_matrix(&y), text);
    }

    #[test]
    fn labels_remapped() {
        assert_eq!(parse_labels("0\n0\n1\n", p()).unwrap().0, vec![0, 0, 1]);
        assert_eq!(parse_labels("5\n5\n9\n", p()).unwrap().0, vec![0, 0, 1]);
        assert!(parse_labels("", p()).is_err());
        assert!(matches!(
            parse_labels("0\n1.5\n", p()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_labels("-1\n", p()).is_err());
    }
}
