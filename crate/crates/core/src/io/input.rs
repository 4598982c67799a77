use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// Observations with optional class labels and trait scores.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub data: DataMatrix,
    pub labels: Option<Vec<String>>,
    pub scores: Option<Vec<f64>>,
}

impl LabeledDataset {
    pub fn unlabeled(data: DataMatrix) -> Self {
        Self {
            data,
            labels: None,
            scores: None,
        }
    }

    pub fn n(&self) -> usize {
        self.data.n()
    }

    pub fn with_labels(data: DataMatrix, labels: Vec<String>) -> Result<Self> {
        if labels.len() != data.n() {
            return Err(Error::DimensionMismatch {
                expected: data.n(),
                found: labels.len(),
            });
        }
        Ok(Self {
            data,
            labels: Some(labels),
            scores: None,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct CsvOptions<'a> {
    pub has_header: bool,
    /// Header name of a column holding class labels.
    pub label_column: Option<&'a str>,
    /// Header name of a numeric column holding trait scores.
    pub score_column: Option<&'a str>,
}

/// Reads a comma-separated numeric matrix. Label and score columns are removed
/// from the body; every remaining cell must parse as a finite number.
pub fn read_csv_matrix(path: impl AsRef<Path>, options: &CsvOptions<'_>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_reader(file, path, options)
}

/// [`read_csv_matrix`] over any reader; `origin` is only used in messages.
pub fn read_csv_reader<R: Read>(
    reader: R,
    origin: impl AsRef<Path>,
    options: &CsvOptions<'_>,
) -> Result<LabeledDataset> {
    let origin = origin.as_ref();
    let format_err = |message: String| Error::Format {
        path: origin.to_path_buf(),
        message,
    };
    if !options.has_header && (options.label_column.is_some() || options.score_column.is_some()) {
        return Err(format_err(
            "label and score columns require a header row".into(),
        ));
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let find = |name: Option<&str>, headers: &csv::StringRecord| -> Result<Option<usize>> {
        name.map(|name| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| format_err(format!("no column named '{name}'")))
        })
        .transpose()
    };
    let (label_idx, score_idx, width) = if options.has_header {
        let headers = reader.headers()?.clone();
        (
            find(options.label_column, &headers)?,
            find(options.score_column, &headers)?,
            Some(headers.len()),
        )
    } else {
        (None, None, None)
    };
    if label_idx.is_some() && label_idx == score_idx {
        return Err(format_err("label and score columns must differ".into()));
    }

    let mut width = width;
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut scores = Vec::new();
    let mut n = 0;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(n + 1, |p| p.line() as usize);
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                row: line,
                column: record.len().min(expected) + 1,
                message: format!("expected {expected} fields, found {}", record.len()),
            });
        }
        for (col, cell) in record.iter().enumerate() {
            if Some(col) == label_idx {
                labels.push(cell.to_string());
                continue;
            }
            let value = parse_cell(cell).ok_or_else(|| Error::Parse {
                path: origin.to_path_buf(),
                row: line,
                column: col + 1,
                message: format!("'{cell}' is not a finite number"),
            })?;
            if Some(col) == score_idx {
                scores.push(value);
            } else {
                values.push(value);
            }
        }
        n += 1;
    }

    if n == 0 {
        return Err(format_err("no data rows".into()));
    }
    let p =
        width.unwrap_or(0) - usize::from(label_idx.is_some()) - usize::from(score_idx.is_some());
    if p == 0 {
        return Err(format_err("no numeric feature columns".into()));
    }
    let data = DataMatrix::with_min_rows(n, p, values, 1)?;
    Ok(LabeledDataset {
        data,
        labels: label_idx.map(|_| labels),
        scores: score_idx.map(|_| scores),
    })
}

fn parse_cell(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads a vector (e.g. a null center) written one value per line or comma separated.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        for (col, cell) in line.split(',').enumerate() {
            let cell = cell.trim();
            if cell.is_empty() {
                continue;
            }
            out.push(parse_cell(cell).ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                row: line_no + 1,
                column: col + 1,
                message: format!("'{cell}' is not a finite number"),
            })?);
        }
    }
    if out.is_empty() {
        return Err(Error::Format {
            path: path.to_path_buf(),
            message: "empty vector".into(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, options: &CsvOptions<'_>) -> Result<LabeledDataset> {
        read_csv_reader(text.as_bytes(), "mem.csv", options)
    }

    #[test]
    fn plain_numeric() {
        let ds = read("1,2\n3,4\n5,6\n", &CsvOptions::default()).unwrap();
        assert_eq!((ds.data.n(), ds.data.p()), (3, 2));
        assert_eq!(ds.data.row(2), &[5.0, 6.0]);
        assert!(ds.labels.is_none());
    }

    #[test]
    fn label_column_is_removed() {
        let options = CsvOptions {
            has_header: true,
            label_column: Some("label"),
            ..Default::default()
        };
        let ds = read("x,label,y\n1,a,2\n3,a,4\n5,b,6\n", &options).unwrap();
        assert_eq!(ds.labels.unwrap(), vec!["a", "a", "b"]);
        assert_eq!(ds.data.p(), 2);
        assert_eq!(ds.data.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn score_column() {
        let options = CsvOptions {
            has_header: true,
            score_column: Some("s"),
            ..Default::default()
        };
        let ds = read("s,x\n0.5,1\n1.5,2\n", &options).unwrap();
        assert_eq!(ds.scores.unwrap(), vec![0.5, 1.5]);
        assert_eq!(ds.data.as_slice(), &[1.0, 2.0]);
    }

    #[test]
    fn bad_cell_names_row_and_column() {
        let err = read("1,2\n3,abc\n", &CsvOptions::default()).unwrap_err();
        match err {
            Error::Parse { row, column, .. } => assert_eq!((row, column), (2, 2)),
            other => panic!("unexpected {other}"),
        }
        assert!(read("1,2\n3,NaN\n", &CsvOptions::default()).is_err());
    }

    #[test]
    fn ragged_and_empty() {
        assert!(matches!(
            read("1,2\n3\n", &CsvOptions::default()),
            Err(Error::Parse { row: 2, .. })
        ));
        assert!(read("", &CsvOptions::default()).is_err());
        let header_only = CsvOptions {
            has_header: true,
            ..Default::default()
        };
        assert!(read("a,b\n", &header_only).is_err());
        let missing = CsvOptions {
            has_header: true,
            label_column: Some("nope"),
            ..Default::default()
        };
        assert!(read("a,b\n1,2\n", &missing).is_err());
    }

    #[test]
    fn missing_file_names_path() {
        let err = read_csv_matrix("/no/such/file.csv", &CsvOptions::default()).unwrap_err();
        assert!(err.to_string().contains("/no/such/file.csv"));
    }
}
