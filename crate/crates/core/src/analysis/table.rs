//! Labeled feature tables with CSV round-trip.

use std::collections::HashSet;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const LABEL_COLUMN: &str = "label";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl FeatureTable {
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        let mut seen = HashSet::new();
        for n in &names {
            if n == LABEL_COLUMN || !seen.insert(n.as_str()) {
                return Err(Error::Consistency(format!("duplicate or reserved column name '{n}'")));
            }
        }
        if rows.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != names.len() {
                return Err(Error::Shape(format!(
                    "row {i} has {} values for {} columns",
                    r.len(),
                    names.len()
                )));
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::Consistency(format!("row {i} has a missing or non-finite value")));
            }
        }
        Ok(FeatureTable { names, rows, labels })
    }

    /// Builds a table from named columns of equal length.
    pub fn from_columns(columns: Vec<(String, Vec<f64>)>, labels: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        if let Some((name, c)) = columns.iter().find(|(_, c)| c.len() != n) {
            return Err(Error::Shape(format!(
                "column '{name}' has {} values, expected {n}",
                c.len()
            )));
        }
        let rows = (0..n).map(|i| columns.iter().map(|(_, c)| c[i]).collect()).collect();
        Self::new(columns.into_iter().map(|(name, _)| name).collect(), rows, labels)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::domain(format!("no feature column '{name}'")))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Table restricted to the named columns, in the given order.
    pub fn select(&self, names: &[&str]) -> Result<FeatureTable> {
        let idx: Vec<usize> = names.iter().map(|n| self.column_index(n)).collect::<Result<_>>()?;
        let rows = self.rows.iter().map(|r| idx.iter().map(|&i| r[i]).collect()).collect();
        FeatureTable::new(
            names.iter().map(|s| s.to_string()).collect(),
            rows,
            self.labels.clone(),
        )
    }

    /// Number of classes, `max label + 1`.
    pub fn class_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// CSV with a header row; the label is the first column.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Format(format!("writing feature table: {e}"));
        let mut header = vec![LABEL_COLUMN.to_string()];
        header.extend(self.names.iter().cloned());
        out.write_record(&header).map_err(io)?;
        for (row, label) in self.rows.iter().zip(&self.labels) {
            let mut rec = vec![label.to_string()];
            rec.extend(row.iter().map(|v| format!("{v:?}")));
            out.write_record(&rec).map_err(io)?;
        }
        out.flush().map_err(|e| Error::Format(format!("writing feature table: {e}")))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<FeatureTable> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let header = rdr
            .headers()
            .map_err(|e| Error::Format(format!("feature table header: {e}")))?
            .clone();
        let label_at = header
            .iter()
            .position(|h| h == LABEL_COLUMN)
            .ok_or_else(|| Error::Format("feature table has no 'label' column".into()))?;
        let names: Vec<String> = header
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != label_at)
            .map(|(_, h)| h.to_string())
            .collect();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (ri, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Format(format!("feature table: {e}")))?;
            let row_no = ri + 2;
            let mut row = Vec::with_capacity(names.len());
            for (ci, field) in rec.iter().enumerate() {
                if ci == label_at {
                    labels.push(field.parse::<usize>().map_err(|e| Error::Parse {
                        row: row_no,
                        column: ci + 1,
                        message: e.to_string(),
                    })?);
                } else {
                    row.push(field.parse::<f64>().map_err(|e| Error::Parse {
                        row: row_no,
                        column: ci + 1,
                        message: e.to_string(),
                    })?);
                }
            }
            rows.push(row);
        }
        FeatureTable::new(names, rows, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> FeatureTable {
        FeatureTable::from_columns(
            vec![("a".into(), vec![1.0, 2.0, 3.0]), ("b".into(), vec![0.5, -1.0, 1e-3])],
            vec![0, 1, 1],
        )
        .unwrap()
    }

    #[test]
    fn columns_and_selection() {
        let t = table();
        assert_eq!(t.column("b").unwrap(), vec![0.5, -1.0, 1e-3]);
        let s = t.select(&["b", "a"]).unwrap();
        assert_eq!(s.rows()[1], vec![-1.0, 2.0]);
        assert!(t.column("c").is_err());
        assert_eq!(t.class_count(), 2);
    }

    #[test]
    fn invariants() {
        assert!(FeatureTable::new(vec!["a".into(), "a".into()], vec![], vec![]).is_err());
        assert!(FeatureTable::new(vec!["label".into()], vec![], vec![]).is_err());
        assert!(FeatureTable::new(vec!["a".into()], vec![vec![f64::NAN]], vec![0]).is_err());
        assert!(FeatureTable::new(vec!["a".into()], vec![vec![1.0, 2.0]], vec![0]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = table();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("label,a,b\n0,1.0,0.5\n"));
        assert_eq!(FeatureTable::read_csv(&buf[..]).unwrap(), t);
        let bad = "label,a\n0,x\n";
        assert!(matches!(
            FeatureTable::read_csv(bad.as_bytes()),
            Err(Error::Parse { row: 2, column: 2, .. })
        ));
    }
}
