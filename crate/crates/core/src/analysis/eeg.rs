//! Per-channel, per-band entropy features of multichannel recordings.

use std::io::Read;

use serde::{Deserialize, Serialize};

use super::anova::{f_ratio, group_by_label, FRatioResult};
use super::table::FeatureTable;
use crate::engine::{Engine, NNetEnSettings};
use crate::error::{Error, Result};
use crate::ref_entropy::{sample_entropy, svd_entropy, SampEnParams, SvdEnParams};
use crate::sigprep::{component_signal, prepare_signal, Component, FilterMode, FilterSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub label: usize,
    /// `(name, samples)` per channel, equal lengths.
    pub channels: Vec<(String, Vec<f64>)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyMeasure {
    NNetEn(NNetEnSettings),
    SampEn(SampEnParams),
    SvdEn(SvdEnParams),
}

impl EntropyMeasure {
    /// Undefined sample entropy is reported as an error: feature tables do
    /// not hold missing values.
    pub fn evaluate(&self, engine: &Engine, series: &[f64]) -> Result<f64> {
        match self {
            EntropyMeasure::NNetEn(s) => Ok(engine.compute_nneten(series, s)?.value),
            EntropyMeasure::SampEn(p) => sample_entropy(series, *p)?
                .ok_or_else(|| Error::domain("sample entropy undefined: no matching templates")),
            EntropyMeasure::SvdEn(p) => svd_entropy(series, *p),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EegConfig {
    pub filter: FilterSpec,
    pub filter_mode: FilterMode,
    pub levels: usize,
    /// Samples per analysed segment; each recording is cut into
    /// non-overlapping segments and the tail is dropped.
    pub segment_len: usize,
    pub components: Vec<Component>,
    pub measure: EntropyMeasure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSeparation {
    pub column: String,
    pub f_ratio: FRatioResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EegFeatures {
    pub table: FeatureTable,
    pub separation: Vec<ColumnSeparation>,
}

/// Reads one recording: one column per channel, one row per sample. A
/// non-numeric first row names the channels, otherwise they are `ch1..`.
pub fn read_channels_csv<R: Read>(r: R) -> Result<Vec<(String, Vec<f64>)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut names: Option<Vec<String>> = None;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (ri, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Format(format!("channel CSV: {e}")))?;
        if ri == 0 && rec.iter().any(|f| f.parse::<f64>().is_err()) {
            names = Some(rec.iter().map(str::to_string).collect());
            columns = vec![Vec::new(); rec.len()];
            continue;
        }
        if columns.is_empty() {
            columns = vec![Vec::new(); rec.len()];
        }
        if rec.len() != columns.len() {
            return Err(Error::Format(format!(
                "row {} has {} fields, expected {}",
                ri + 1,
                rec.len(),
                columns.len()
            )));
        }
        for (ci, field) in rec.iter().enumerate() {
            let v = field.parse::<f64>().map_err(|e| Error::Parse {
                row: ri + 1,
                column: ci + 1,
                message: e.to_string(),
            })?;
            columns[ci].push(v);
        }
    }
    if columns.is_empty() || columns[0].is_empty() {
        return Err(Error::Format("channel CSV holds no samples".into()));
    }
    let names = names.unwrap_or_else(|| (1..=columns.len()).map(|i| format!("ch{i}")).collect());
    Ok(names.into_iter().zip(columns).collect())
}

struct Segment<'a> {
    label: usize,
    channels: Vec<&'a [f64]>,
}

/// Filters and decomposes every segment of every channel and tabulates the
/// entropy of each selected component, with the between-class F-ratio per
/// column.
pub fn eeg_features(engine: &Engine, recordings: &[Recording], config: &EegConfig) -> Result<EegFeatures> {
    let first = recordings
        .first()
        .ok_or_else(|| Error::domain("no recordings given"))?;
    let names: Vec<&str> = first.channels.iter().map(|(n, _)| n.as_str()).collect();
    if config.segment_len == 0 || config.components.is_empty() {
        return Err(Error::domain("segment length and component list must be non-empty"));
    }
    let mut segments = Vec::new();
    for (ri, rec) in recordings.iter().enumerate() {
        let rec_names: Vec<&str> = rec.channels.iter().map(|(n, _)| n.as_str()).collect();
        if rec_names != names {
            return Err(Error::Consistency(format!(
                "recording {ri} channels {rec_names:?} differ from {names:?}"
            )));
        }
        let len = rec.channels[0].1.len();
        if rec.channels.iter().any(|(_, c)| c.len() != len) {
            return Err(Error::Shape(format!("recording {ri} has channels of unequal length")));
        }
        for s in 0..len / config.segment_len {
            let range = s * config.segment_len..(s + 1) * config.segment_len;
            segments.push(Segment {
                label: rec.label,
                channels: rec.channels.iter().map(|(_, c)| &c[range.clone()]).collect(),
            });
        }
    }
    if segments.is_empty() {
        return Err(Error::domain("recordings are shorter than one segment"));
    }

    let row_of = |seg: &Segment| -> Result<Vec<f64>> {
        let mut row = Vec::with_capacity(names.len() * config.components.len());
        for ch in &seg.channels {
            let variants = prepare_signal(ch, &config.filter, config.filter_mode, config.levels)?;
            for &c in &config.components {
                row.push(config.measure.evaluate(engine, component_signal(&variants, c)?)?);
            }
        }
        Ok(row)
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        segments.par_iter().map(row_of).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<f64>> = segments.iter().map(row_of).collect::<Result<_>>()?;

    let columns: Vec<String> = names
        .iter()
        .flat_map(|n| config.components.iter().map(move |c| format!("{n}:{c}")))
        .collect();
    let labels: Vec<usize> = segments.iter().map(|s| s.label).collect();
    let table = FeatureTable::new(columns, rows, labels)?;
    let classes = table.class_count();
    let separation = table
        .names()
        .iter()
        .map(|name| {
            let groups = group_by_label(&table.column(name)?, table.labels(), classes)?;
            let groups: Vec<Vec<f64>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
            Ok(ColumnSeparation {
                column: name.clone(),
                f_ratio: f_ratio(&groups)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EegFeatures { table, separation })
}
