//! Reference datasets that drive the entropy classifier.
//!
//! `D1` is the MNIST-10 digit set (784 pixel features, 10 classes) and `D2`
//! is the SARS-CoV-2-RBV1 blood-parameter set (51 features, 2 classes, train
//! and test sets identical). Both are held immutably in a [`LabeledDataset`]
//! and can be subsampled per class by a usage fraction `mu`.

mod idx;
mod rbv1;
pub mod synthetic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use idx::{load_mnist, read_idx_images, read_idx_labels, write_idx_images, write_idx_labels};
pub use rbv1::{load_rbv1, write_rbv1_csv};

/// Per-class sample counts of the MNIST-10 training set.
pub const MNIST_TRAIN_COUNTS: [usize; 10] =
    [5923, 6742, 5958, 6131, 5842, 5421, 5918, 6265, 5851, 5949];
/// Per-class sample counts of the MNIST-10 test set.
pub const MNIST_TEST_COUNTS: [usize; 10] = [980, 1135, 1032, 1010, 982, 892, 958, 1028, 974, 1009];
/// Patients per class in SARS-CoV-2-RBV1.
pub const RBV1_CLASS_COUNT: usize = 2648;

pub const MIN_MU: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DatasetKind {
    /// MNIST-10 handwritten digits.
    D1,
    /// SARS-CoV-2-RBV1 routine blood parameters.
    D2,
}

impl DatasetKind {
    pub const fn feature_count(self) -> usize {
        match self {
            DatasetKind::D1 => 784,
            DatasetKind::D2 => 51,
        }
    }

    pub const fn class_count(self) -> usize {
        match self {
            DatasetKind::D1 => 10,
            DatasetKind::D2 => 2,
        }
    }

    /// Length of the classifier input vector, bias included.
    pub const fn input_dim(self) -> usize {
        self.feature_count() + 1
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetKind::D1 => f.write_str("D1"),
            DatasetKind::D2 => f.write_str("D2"),
        }
    }
}

impl FromStr for DatasetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "d1" | "mnist" => Ok(DatasetKind::D1),
            "d2" | "rbv1" => Ok(DatasetKind::D2),
            other => Err(Error::Config(format!("unknown dataset '{other}'"))),
        }
    }
}

/// Feature storage. MNIST pixels stay as raw bytes; RBV1 values as `f64`.
#[derive(Debug, Clone, PartialEq)]
pub enum Features {
    Pixels(Vec<u8>),
    Values(Vec<f64>),
}

/// One raw (un-normalized) feature row.
#[derive(Debug, Clone, Copy)]
pub enum RawRow<'a> {
    Pixels(&'a [u8]),
    Values(&'a [f64]),
}

impl RawRow<'_> {
    pub fn get(&self, i: usize) -> f64 {
        match self {
            RawRow::Pixels(p) => f64::from(p[i]),
            RawRow::Values(v) => v[i],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            RawRow::Pixels(p) => p.len(),
            RawRow::Values(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_vec(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }
}

/// A set of labelled feature rows stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    features: Features,
    labels: Vec<u8>,
    feature_count: usize,
}

impl Split {
    pub fn new(features: Features, labels: Vec<u8>, feature_count: usize) -> Result<Self> {
        let cells = match &features {
            Features::Pixels(p) => p.len(),
            Features::Values(v) => v.len(),
        };
        if feature_count == 0 || cells != labels.len() * feature_count {
            return Err(Error::Consistency(format!(
                "{} feature cells do not form {} rows of {} features",
                cells,
                labels.len(),
                feature_count
            )));
        }
        if let Features::Values(v) = &features {
            if let Some(pos) = v.iter().position(|x| !x.is_finite()) {
                return Err(Error::Format(format!(
                    "non-finite feature in row {}",
                    pos / feature_count
                )));
            }
        }
        Ok(Split {
            features,
            labels,
            feature_count,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn features(&self) -> &Features {
        &self.features
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn row(&self, i: usize) -> RawRow<'_> {
        let range = i * self.feature_count..(i + 1) * self.feature_count;
        match &self.features {
            Features::Pixels(p) => RawRow::Pixels(&p[range]),
            Features::Values(v) => RawRow::Values(&v[range]),
        }
    }

    pub fn class_counts(&self, class_count: usize) -> Vec<usize> {
        let mut counts = vec![0; class_count];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
    }

    fn select(&self, indices: &[usize]) -> Split {
        let fc = self.feature_count;
        let features = match &self.features {
            Features::Pixels(p) => Features::Pixels(
                indices
                    .iter()
                    .flat_map(|&i| p[i * fc..(i + 1) * fc].iter().copied())
                    .collect(),
            ),
            Features::Values(v) => Features::Values(
                indices
                    .iter()
                    .flat_map(|&i| v[i * fc..(i + 1) * fc].iter().copied())
                    .collect(),
            ),
        };
        Split {
            features,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_count: fc,
        }
    }

    /// Per-feature minimum and maximum over all rows.
    pub fn bounds(&self) -> FeatureBounds {
        let mut min = vec![f64::INFINITY; self.feature_count];
        let mut max = vec![f64::NEG_INFINITY; self.feature_count];
        for i in 0..self.len() {
            let row = self.row(i);
            for f in 0..self.feature_count {
                let x = row.get(f);
                min[f] = min[f].min(x);
                max[f] = max[f].max(x);
            }
        }
        FeatureBounds { min, max }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureBounds {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Normalization {
    /// Divide every pixel by 255.
    Scale255,
    /// Per-feature min-max onto `[0, 1]`; constant features map to 0.
    MinMax(FeatureBounds),
}

/// Which min/max statistics a subsampled D2 set normalizes with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundsSource {
    /// Keep the statistics of the database the subset was drawn from.
    #[default]
    FullDatabase,
    /// Recompute them from the subset itself.
    Subsample,
}

/// Classifier input vector `y` with `y[0] == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputVector(Vec<f64>);

impl InputVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    kind: DatasetKind,
    train: Split,
    test: Split,
    mu: f64,
    normalization: Normalization,
}

impl LabeledDataset {
    /// Builds a dataset from separate train and test splits.
    pub fn new(kind: DatasetKind, train: Split, test: Split) -> Result<Self> {
        for (name, split) in [("train", &train), ("test", &test)] {
            validate_split(kind, split, name)?;
        }
        let normalization = match kind {
            DatasetKind::D1 => Normalization::Scale255,
            DatasetKind::D2 => Normalization::MinMax(train.bounds()),
        };
        Ok(LabeledDataset {
            kind,
            train,
            test,
            mu: 1.0,
            normalization,
        })
    }

    /// Builds a dataset whose training and test sets coincide (RBV1 usage).
    pub fn coincident(kind: DatasetKind, rows: Split) -> Result<Self> {
        Self::new(kind, rows.clone(), rows)
    }

    pub fn kind(&self) -> DatasetKind {
        self.kind
    }

    pub fn train(&self) -> &Split {
        &self.train
    }

    pub fn test(&self) -> &Split {
        &self.test
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn class_count(&self) -> usize {
        self.kind.class_count()
    }

    pub fn feature_count(&self) -> usize {
        self.kind.feature_count()
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    /// Per-class stratified subset taking the first samples of each class in
    /// file order. Min/max statistics are kept from this dataset.
    pub fn subsample(&self, mu: f64) -> Result<LabeledDataset> {
        self.subsample_with(mu, BoundsSource::FullDatabase)
    }

    pub fn subsample_with(&self, mu: f64, bounds: BoundsSource) -> Result<LabeledDataset> {
        if !(MIN_MU..=1.0).contains(&mu) {
            return Err(Error::domain(format!(
                "usage fraction mu = {mu} outside [{MIN_MU}, 1]"
            )));
        }
        let k = self.class_count();
        let train = take_per_class(&self.train, k, mu);
        let test = if self.train == self.test {
            train.clone()
        } else {
            take_per_class(&self.test, k, mu)
        };
        if train.is_empty() || test.is_empty() {
            return Err(Error::domain(format!(
                "mu = {mu} leaves no samples to train or test on"
            )));
        }
        let normalization = match (&self.normalization, bounds) {
            (Normalization::MinMax(_), BoundsSource::Subsample) => {
                Normalization::MinMax(train.bounds())
            }
            (n, _) => n.clone(),
        };
        Ok(LabeledDataset {
            kind: self.kind,
            train,
            test,
            mu: self.mu * mu,
            normalization,
        })
    }

    /// Normalizes one raw feature row into a classifier input vector.
    pub fn normalize_input(&self, raw: &[f64]) -> Result<InputVector> {
        if raw.len() != self.feature_count() {
            return Err(Error::Shape(format!(
                "raw feature vector has length {}, dataset expects {}",
                raw.len(),
                self.feature_count()
            )));
        }
        let mut y = vec![0.0; raw.len() + 1];
        self.normalize_into(RawRow::Values(raw), &mut y);
        Ok(InputVector(y))
    }

    /// Writes the normalized input vector of `row` (bias first) into `out`.
    pub fn normalize_into(&self, row: RawRow<'_>, out: &mut [f64]) {
        debug_assert_eq!(out.len(), row.len() + 1);
        out[0] = 1.0;
        match &self.normalization {
            Normalization::Scale255 => {
                for (i, o) in out[1..].iter_mut().enumerate() {
                    *o = row.get(i) / 255.0;
                }
            }
            Normalization::MinMax(b) => {
                for (i, o) in out[1..].iter_mut().enumerate() {
                    let span = b.max[i] - b.min[i];
                    *o = if span == 0.0 {
                        0.0
                    } else {
                        (row.get(i) - b.min[i]) / span
                    };
                }
            }
        }
    }
}

fn validate_split(kind: DatasetKind, split: &Split, name: &str) -> Result<()> {
    if split.feature_count() != kind.feature_count() {
        return Err(Error::Format(format!(
            "{kind} {name} rows have {} features, expected {}",
            split.feature_count(),
            kind.feature_count()
        )));
    }
    let k = kind.class_count();
    if let Some(bad) = split.labels().iter().find(|&&l| usize::from(l) >= k) {
        return Err(Error::Consistency(format!(
            "{kind} {name} label {bad} outside [0, {k})"
        )));
    }
    Ok(())
}

/// Number of samples to keep from each class: largest-remainder apportionment
/// of `round(mu * total)` over the classes, ties broken by class index.
pub fn per_class_quota(counts: &[usize], mu: f64) -> Vec<usize> {
    let total: usize = counts.iter().sum();
    let target = (mu * total as f64).round() as usize;
    let exact: Vec<f64> = counts.iter().map(|&c| mu * c as f64).collect();
    let mut quota: Vec<usize> = exact
        .iter()
        .zip(counts)
        .map(|(&e, &c)| ((e + 1e-9).floor() as usize).min(c))
        .collect();
    let assigned: usize = quota.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - quota[a] as f64;
        let rb = exact[b] - quota[b] as f64;
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut remaining = target.saturating_sub(assigned);
    for c in order {
        if remaining == 0 {
            break;
        }
        if quota[c] < counts[c] {
            quota[c] += 1;
            remaining -= 1;
        }
    }
    quota
}

fn take_per_class(split: &Split, class_count: usize, mu: f64) -> Split {
    if mu == 1.0 {
        return split.clone();
    }
    let mut quota = per_class_quota(&split.class_counts(class_count), mu);
    let indices: Vec<usize> = split
        .labels()
        .iter()
        .enumerate()
        .filter_map(|(i, &l)| {
            let q = &mut quota[l as usize];
            (*q > 0).then(|| {
                *q -= 1;
                i
            })
        })
        .collect();
    split.select(&indices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2_rows(values: Vec<f64>, labels: Vec<u8>) -> Split {
        Split::new(Features::Values(values), labels, 51).unwrap()
    }

    #[test]
    fn quota_hits_published_totals() {
        let q = per_class_quota(&MNIST_TRAIN_COUNTS, 0.01);
        assert_eq!(q.iter().sum::<usize>(), 600);
        let q = per_class_quota(&MNIST_TEST_COUNTS, 0.01);
        assert_eq!(q.iter().sum::<usize>(), 100);
        let q = per_class_quota(&[RBV1_CLASS_COUNT; 2], 0.01);
        assert_eq!(q, vec![27, 26]);
    }

    #[test]
    fn quota_stays_within_rounding_of_proportional() {
        for mu in [0.01, 0.03, 0.1, 0.29, 0.5, 0.77, 1.0] {
            let q = per_class_quota(&MNIST_TRAIN_COUNTS, mu);
            for (&qc, &c) in q.iter().zip(&MNIST_TRAIN_COUNTS) {
                assert!((qc as f64 - mu * c as f64).abs() < 1.0, "mu={mu}");
            }
        }
    }

    #[test]
    fn mu_out_of_range_is_domain_error() {
        let rows = d2_rows(vec![0.0; 102], vec![0, 1]);
        let ds = LabeledDataset::coincident(DatasetKind::D2, rows).unwrap();
        assert!(matches!(ds.subsample(0.001), Err(Error::Domain(_))));
        assert!(matches!(ds.subsample(1.5), Err(Error::Domain(_))));
        assert_eq!(ds.subsample(1.0).unwrap(), ds);
    }

    #[test]
    fn subsample_takes_file_order_within_class() {
        // labels 0,1,0,1,... with feature[0] == row index
        let n = 200;
        let mut values = vec![0.0; n * 51];
        for i in 0..n {
            values[i * 51] = i as f64;
        }
        let labels = (0..n).map(|i| (i % 2) as u8).collect();
        let ds = LabeledDataset::coincident(DatasetKind::D2, d2_rows(values, labels)).unwrap();
        let sub = ds.subsample(0.1).unwrap();
        let firsts: Vec<f64> = (0..sub.train().len())
            .map(|i| sub.train().row(i).get(0))
            .collect();
        let expected: Vec<f64> = (0..20).map(f64::from).collect();
        assert_eq!(firsts, expected);
        assert_eq!(sub.train(), sub.test());
        assert_eq!(sub.subsample(1.0).unwrap(), sub);
    }

    #[test]
    fn d2_normalization_endpoints_and_constant_column() {
        let mut values = vec![5.0; 2 * 51];
        values[0] = 2.0;
        values[51] = 4.0;
        let ds =
            LabeledDataset::coincident(DatasetKind::D2, d2_rows(values, vec![0, 1])).unwrap();
        let mut raw = vec![5.0; 51];
        raw[0] = 2.0;
        let y = ds.normalize_input(&raw).unwrap();
        assert_eq!(y.as_slice()[0], 1.0);
        assert_eq!(y.as_slice()[1], 0.0);
        // constant columns
        assert!(y.as_slice()[2..].iter().all(|&v| v == 0.0));
        raw[0] = 4.0;
        assert_eq!(ds.normalize_input(&raw).unwrap().as_slice()[1], 1.0);
        raw[0] = 3.0;
        assert_eq!(ds.normalize_input(&raw).unwrap().as_slice()[1], 0.5);
    }

    #[test]
    fn d1_scales_by_255() {
        let px = Split::new(Features::Pixels(vec![0; 784]), vec![3], 784).unwrap();
        let ds = LabeledDataset::new(DatasetKind::D1, px.clone(), px).unwrap();
        let mut raw = vec![0.0; 784];
        raw[10] = 255.0;
        let y = ds.normalize_input(&raw).unwrap();
        assert_eq!(y.as_slice()[0], 1.0);
        assert_eq!(y.as_slice()[1], 0.0);
        assert_eq!(y.as_slice()[11], 1.0);
        assert!(matches!(ds.normalize_input(&raw[1..]), Err(Error::Shape(_))));
    }

    #[test]
    fn label_out_of_range_rejected() {
        let rows = d2_rows(vec![0.0; 51], vec![2]);
        assert!(matches!(
            LabeledDataset::coincident(DatasetKind::D2, rows),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn bounds_source_switch() {
        let mut values = vec![0.0; 4 * 51];
        for (i, v) in [2.0, 4.0, 0.0, 10.0].iter().enumerate() {
            values[i * 51] = *v;
        }
        let ds = LabeledDataset::coincident(DatasetKind::D2, d2_rows(values, vec![0, 1, 0, 1]))
            .unwrap();
        let keep = ds.subsample(0.5).unwrap();
        let recompute = ds.subsample_with(0.5, BoundsSource::Subsample).unwrap();
        let Normalization::MinMax(full) = keep.normalization() else {
            unreachable!()
        };
        let Normalization::MinMax(sub) = recompute.normalization() else {
            unreachable!()
        };
        assert_eq!((full.min[0], full.max[0]), (0.0, 10.0));
        assert_eq!((sub.min[0], sub.max[0]), (2.0, 4.0));
        assert_eq!(recompute.train().len(), 2);
    }
}
