//! Entropy sweeps over settings and entropy-difference F-ratio grids.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::anova::{f_ratio, group_by_label, FRatioResult, FStatistic};
use crate::dataset::DatasetKind;
use crate::engine::{Engine, NNetEnSettings, NSET_COUNT};
use crate::error::{Error, Result};
use crate::lognnet::MetricKind;
use crate::reservoir::FillMethod;

/// Statistics of one setting across classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub nset: u32,
    pub metric: MetricKind,
    pub method: FillMethod,
    pub epochs: usize,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub f_ratio: FRatioResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySweep {
    pub dataset: DatasetKind,
    pub mu: f64,
    pub nsets: Vec<u32>,
    /// `values[class][series][k]` is the entropy at `nsets[k]`.
    pub values: Vec<Vec<Vec<f64>>>,
    pub rows: Vec<SweepRow>,
}

impl EntropySweep {
    /// The row with the largest F (infinite ranks highest).
    pub fn best(&self) -> Option<&SweepRow> {
        self.rows
            .iter()
            .reduce(|a, b| if b.f_ratio.f.score() > a.f_ratio.f.score() { b } else { a })
    }

    /// Entropy of every series at `nsets[k]`, classes concatenated, with the
    /// matching class labels.
    pub fn feature(&self, k: usize) -> (Vec<f64>, Vec<usize>) {
        let mut v = Vec::new();
        let mut labels = Vec::new();
        for (class, series) in self.values.iter().enumerate() {
            for s in series {
                v.push(s[k]);
                labels.push(class);
            }
        }
        (v, labels)
    }
}

pub fn all_nsets() -> Vec<u32> {
    (1..=NSET_COUNT).collect()
}

pub fn mean_and_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let var = if x.len() > 1 {
        x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (m, var.sqrt())
}

/// Per-series entropies at every `Nset`, then class means, sample standard
/// deviations and the between-class F-ratio per setting.
///
/// Series are evaluated in parallel; results are assembled in input order.
pub fn entropy_sweep(
    engine: &Engine,
    classes: &[Vec<Vec<f64>>],
    dataset: DatasetKind,
    mu: f64,
    nsets: &[u32],
    seed: u64,
) -> Result<EntropySweep> {
    let decoded: Vec<NNetEnSettings> = nsets
        .iter()
        .map(|&n| NNetEnSettings::from_nset(dataset, mu, n, seed))
        .collect::<Result<_>>()?;
    let flat: Vec<&[f64]> = classes.iter().flat_map(|c| c.iter().map(Vec::as_slice)).collect();
    let eval = |s: &&[f64]| engine.evaluate_nsets(s, dataset, mu, nsets, seed);
    #[cfg(feature = "parallel")]
    let per_series: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        flat.par_iter().map(eval).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let per_series: Vec<Vec<f64>> = flat.iter().map(eval).collect::<Result<_>>()?;

    let mut values = Vec::with_capacity(classes.len());
    let mut it = per_series.into_iter();
    for c in classes {
        values.push(it.by_ref().take(c.len()).collect::<Vec<_>>());
    }

    let mut rows = Vec::with_capacity(nsets.len());
    for (k, (&nset, s)) in nsets.iter().zip(&decoded).enumerate() {
        let groups: Vec<Vec<f64>> = values
            .iter()
            .map(|class| class.iter().map(|v| v[k]).collect())
            .collect();
        let (means, stds) = groups.iter().map(|g| mean_and_std(g)).unzip();
        rows.push(SweepRow {
            nset,
            metric: s.metric,
            method: s.method,
            epochs: s.epochs,
            means,
            stds,
            f_ratio: f_ratio(&groups)?,
        });
    }
    Ok(EntropySweep {
        dataset,
        mu,
        nsets: nsets.to_vec(),
        values,
        rows,
    })
}

/// `grid[i][j]` is the F-ratio across classes of `a[i] - b[j]`, where `a[i]`
/// and `b[j]` hold one value per observation.
pub fn difference_grid(a: &[Vec<f64>], b: &[Vec<f64>], labels: &[usize]) -> Result<Vec<Vec<FRatioResult>>> {
    let n = labels.len();
    if let Some(bad) = a.iter().chain(b).find(|v| v.len() != n) {
        return Err(Error::Shape(format!(
            "feature axis has {} observations, labels have {n}",
            bad.len()
        )));
    }
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let row = |x: &Vec<f64>| -> Result<Vec<FRatioResult>> {
        b.iter()
            .map(|y| {
                let d: Vec<f64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
                f_ratio(&group_by_label(&d, labels, classes)?)
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        a.par_iter().map(row).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        a.iter().map(row).collect()
    }
}

/// Position and value of the largest F in a grid.
pub fn grid_peak(grid: &[Vec<FRatioResult>]) -> Option<(usize, usize, FStatistic)> {
    let mut best: Option<(usize, usize, FStatistic)> = None;
    for (i, row) in grid.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            if best.is_none_or(|(_, _, f)| cell.f.score() > f.score()) {
                best = Some((i, j, cell.f));
            }
        }
    }
    best
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Format(format!("writing CSV: {e}"))
}

fn f_cell(f: FStatistic) -> String {
    match f {
        FStatistic::Finite(v) => format!("{v:?}"),
        FStatistic::Infinite => "inf".into(),
        FStatistic::Undefined => "nan".into(),
    }
}

/// One line per setting: `nset,metric,method,epochs,mean_c..,std_c..,f,f_kind,p_value`.
pub fn write_sweep_csv<W: Write>(sweep: &EntropySweep, w: W) -> Result<()> {
    let classes = sweep.values.len();
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = ["nset", "metric", "method", "epochs"].map(String::from).to_vec();
    header.extend((0..classes).map(|c| format!("mean_{c}")));
    header.extend((0..classes).map(|c| format!("std_{c}")));
    header.extend(["f", "f_kind", "p_value"].map(String::from));
    out.write_record(&header).map_err(csv_err)?;
    for r in &sweep.rows {
        let mut rec = vec![
            r.nset.to_string(),
            r.metric.to_string(),
            r.method.to_string(),
            r.epochs.to_string(),
        ];
        rec.extend(r.means.iter().map(|v| format!("{v:?}")));
        rec.extend(r.stds.iter().map(|v| format!("{v:?}")));
        rec.push(f_cell(r.f_ratio.f));
        rec.push(r.f_ratio.f.label().to_string());
        rec.push(format!("{:?}", r.f_ratio.p_value));
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush().map_err(csv_err)
}

/// Matrix of F values with row and column labels.
pub fn write_grid_csv<W: Write>(
    grid: &[Vec<FRatioResult>],
    row_labels: &[String],
    col_labels: &[String],
    w: W,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![String::from("a\\b")];
    header.extend(col_labels.iter().cloned());
    out.write_record(&header).map_err(csv_err)?;
    for (label, row) in row_labels.iter().zip(grid) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(|c| f_cell(c.f)));
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush().map_err(csv_err)
}

/// Decoded `(metric, method, epochs)` label such as `Acc-M3-Ep20`.
pub fn nset_label(n: u32) -> Result<String> {
    let s = NNetEnSettings::from_nset(DatasetKind::D2, 1.0, n, 0)?;
    Ok(format!("{}-{}-Ep{}", s.metric, s.method, s.epochs))
}
