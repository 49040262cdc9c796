//! RBV1 blood-parameter CSV: 51 numeric feature columns followed by a 0/1
//! label column, optional header row.

use std::path::Path;

use super::{DatasetKind, Features, LabeledDataset, Split};
use crate::error::{Error, Result};

const COLUMNS: usize = 52;

pub fn load_rbv1(csv_path: &Path) -> Result<LabeledDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(csv_path)
        .map_err(|e| csv_error(csv_path, e))?;

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(csv_path, e))?;
        let row = row_idx + 1;
        if record.len() != COLUMNS {
            return Err(Error::Format(format!(
                "{}: row {row} has {} columns, expected {COLUMNS}",
                csv_path.display(),
                record.len()
            )));
        }
        // A first row with no parseable numbers is a header.
        if row_idx == 0 && record.iter().all(|c| c.parse::<f64>().is_err()) {
            continue;
        }
        for (col, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column: col + 1,
                message: format!("'{cell}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: col + 1,
                    message: format!("'{cell}' is not finite"),
                });
            }
            if col + 1 < COLUMNS {
                values.push(v);
            } else if v == 0.0 || v == 1.0 {
                labels.push(v as u8);
            } else {
                return Err(Error::Parse {
                    row,
                    column: col + 1,
                    message: format!("label '{cell}' is not 0 or 1"),
                });
            }
        }
    }
    let rows = Split::new(
        Features::Values(values),
        labels,
        DatasetKind::D2.feature_count(),
    )?;
    LabeledDataset::coincident(DatasetKind::D2, rows)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format(format!("{}: {other:?}", path.display())),
    }
}

/// Writes the training rows of a `D2` dataset in the layout `load_rbv1` reads.
pub fn write_rbv1_csv(path: &Path, dataset: &LabeledDataset) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut header: Vec<String> = (1..COLUMNS).map(|i| format!("f{i}")).collect();
    header.push("label".into());
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    let split = dataset.train();
    for i in 0..split.len() {
        let row = split.row(i);
        let mut rec: Vec<String> = (0..row.len()).map(|f| format!("{:?}", row.get(f))).collect();
        rec.push(split.labels()[i].to_string());
        w.write_record(&rec).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn row(features: &[f64], label: u8) -> String {
        let mut cells: Vec<String> = features.iter().map(|v| v.to_string()).collect();
        cells.push(label.to_string());
        cells.join(",")
    }

    #[test]
    fn one_row_per_class() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rbv1.csv");
        let mut a = vec![1.0; 51];
        let b = vec![1.0; 51];
        a[0] = 3.0;
        fs::write(&path, format!("{}\n{}\n", row(&a, 1), row(&b, 0))).unwrap();
        let ds = load_rbv1(&path).unwrap();
        assert_eq!(ds.train().len(), 2);
        assert_eq!(ds.train(), ds.test());
        assert_eq!(ds.class_count(), 2);
        let super::super::Normalization::MinMax(bounds) = ds.normalization() else {
            panic!("expected min-max normalization")
        };
        assert_eq!((bounds.min[0], bounds.max[0]), (1.0, 3.0));
        assert_eq!(bounds.min[1], bounds.max[1]);
    }

    #[test]
    fn header_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rbv1.csv");
        let mut header: Vec<String> = (0..51).map(|i| format!("p{i}")).collect();
        header.push("covid".into());
        fs::write(
            &path,
            format!("{}\n{}\n", header.join(","), row(&[0.5; 51], 0)),
        )
        .unwrap();
        assert_eq!(load_rbv1(&path).unwrap().train().len(), 1);
    }

    #[test]
    fn non_numeric_cell_reports_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rbv1.csv");
        let good = row(&[0.5; 51], 0);
        let bad = good.replacen("0.5", "abc", 1);
        fs::write(&path, format!("{good}\n{bad}\n")).unwrap();
        match load_rbv1(&path).unwrap_err() {
            Error::Parse { row, column, .. } => assert_eq!((row, column), (2, 1)),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn wrong_column_count_is_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rbv1.csv");
        fs::write(&path, "1,2,3\n").unwrap();
        assert!(matches!(load_rbv1(&path), Err(Error::Format(_))));
    }
}
