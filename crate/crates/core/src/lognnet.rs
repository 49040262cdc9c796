//! The reservoir-fed single-layer classifier.
//!
//! Every dataset input vector `Y` is projected through the reservoir,
//! `Sh = W * Y`, the 25 components of `Sh` are min-max normalized with
//! statistics taken over the whole statistics set, and a one-layer logistic
//! classifier is trained on the result by per-sample backpropagation of the
//! squared error. How well it classifies is the entropy value.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Features, LabeledDataset, Split};
use crate::error::{Error, Result};
use crate::reservoir::ReservoirMatrix;

pub const DEFAULT_LEARNING_RATE: f64 = 0.2;
pub const DEFAULT_SEED: u64 = 42;
const INIT_RANGE: f64 = 0.5;

/// `Sh = W * Y` for one input vector.
pub fn compute_sh(reservoir: &ReservoirMatrix, input: &[f64]) -> Result<Vec<f64>> {
    if input.len() != reservoir.cols() {
        return Err(Error::Shape(format!(
            "input vector has length {}, reservoir has {} columns",
            input.len(),
            reservoir.cols()
        )));
    }
    Ok((0..reservoir.rows())
        .map(|j| dot(reservoir.row(j), input))
        .collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

/// Hidden vectors of a whole split, one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ShMatrix {
    data: Vec<f64>,
    width: usize,
}

impl ShMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Shape("hidden rows differ in length".into()));
        }
        Ok(ShMatrix {
            data: rows.concat(),
            width,
        })
    }

    pub fn len(&self) -> usize {
        if self.width == 0 {
            0
        } else {
            self.data.len() / self.width
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.width.max(1))
    }
}

/// Raw `Sh` for every sample of `split`, inputs normalized per `dataset`.
///
/// Pixel inputs skip zero pixels; the sums are accumulated in the same column
/// order as [`compute_sh`], so results agree with it bit for bit.
pub fn compute_sh_matrix(
    reservoir: &ReservoirMatrix,
    dataset: &LabeledDataset,
    split: &Split,
) -> Result<ShMatrix> {
    let dim = dataset.feature_count() + 1;
    if reservoir.cols() != dim {
        return Err(Error::Shape(format!(
            "reservoir has {} columns, {} inputs expect {dim}",
            reservoir.cols(),
            dataset.kind()
        )));
    }
    let rows = reservoir.rows();
    let mut data = vec![0.0; split.len() * rows];
    match split.features() {
        Features::Pixels(pixels) => {
            let fc = split.feature_count();
            let mut nz: Vec<(usize, f64)> = Vec::with_capacity(fc);
            for (i, out) in data.chunks_exact_mut(rows).enumerate() {
                nz.clear();
                nz.extend(
                    pixels[i * fc..(i + 1) * fc]
                        .iter()
                        .enumerate()
                        .filter(|(_, &p)| p != 0)
                        .map(|(c, &p)| (c + 1, f64::from(p) / 255.0)),
                );
                for (j, o) in out.iter_mut().enumerate() {
                    let w = reservoir.row(j);
                    // bias term first, matching the dense sum
                    let mut acc = 0.0 + w[0];
                    for &(c, y) in &nz {
                        acc += w[c] * y;
                    }
                    *o = acc;
                }
            }
        }
        Features::Values(_) => {
            let mut y = vec![0.0; dim];
            for (i, out) in data.chunks_exact_mut(rows).enumerate() {
                dataset.normalize_into(split.row(i), &mut y);
                for (j, o) in out.iter_mut().enumerate() {
                    *o = dot(reservoir.row(j), &y);
                }
            }
        }
    }
    Ok(ShMatrix { data, width: rows })
}

/// Which samples the `Sh` normalization statistics are taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ShStatsScope {
    #[default]
    Training,
    /// Training and test sets together.
    All,
}

/// Per-component minimum, maximum and mean of raw `Sh`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShStats {
    pub sh_min: Vec<f64>,
    pub sh_max: Vec<f64>,
    pub sh_mean: Vec<f64>,
}

impl ShStats {
    /// Single pass over the hidden vectors of the statistics set.
    pub fn from_matrices(sets: &[&ShMatrix]) -> Result<Self> {
        let width = sets.first().map_or(0, |m| m.width());
        let count: usize = sets.iter().map(|m| m.len()).sum();
        if count == 0 {
            return Err(Error::domain("Sh statistics need at least one sample"));
        }
        let mut sh_min = vec![f64::INFINITY; width];
        let mut sh_max = vec![f64::NEG_INFINITY; width];
        let mut sum = vec![0.0; width];
        for row in sets.iter().flat_map(|m| m.rows()) {
            for j in 0..width {
                sh_min[j] = sh_min[j].min(row[j]);
                sh_max[j] = sh_max[j].max(row[j]);
                sum[j] += row[j];
            }
        }
        let sh_mean = sum.into_iter().map(|s| s / count as f64).collect();
        Ok(ShStats {
            sh_min,
            sh_max,
            sh_mean,
        })
    }

    /// Mean of the min-max normalized component, shifted by `-0.5`.
    pub fn mean_term(&self, j: usize) -> f64 {
        let span = self.sh_max[j] - self.sh_min[j];
        if span == 0.0 {
            0.0
        } else {
            (self.sh_mean[j] - self.sh_min[j]) / span - 0.5
        }
    }

    pub fn width(&self) -> usize {
        self.sh_min.len()
    }
}

pub fn compute_sh_stats(
    reservoir: &ReservoirMatrix,
    dataset: &LabeledDataset,
    scope: ShStatsScope,
) -> Result<ShStats> {
    let train = compute_sh_matrix(reservoir, dataset, dataset.train())?;
    match scope {
        ShStatsScope::Training => ShStats::from_matrices(&[&train]),
        ShStatsScope::All => {
            let test = compute_sh_matrix(reservoir, dataset, dataset.test())?;
            ShStats::from_matrices(&[&train, &test])
        }
    }
}

/// Normalizes one hidden vector. Components with `sh_max == sh_min` pass
/// through unchanged.
pub fn normalize_sh(sh: &[f64], stats: &ShStats) -> Vec<f64> {
    let mut out = sh.to_vec();
    normalize_sh_in_place(&mut out, stats);
    out
}

fn normalize_sh_in_place(sh: &mut [f64], stats: &ShStats) {
    for (j, v) in sh.iter_mut().enumerate() {
        let span = stats.sh_max[j] - stats.sh_min[j];
        if span != 0.0 {
            *v = (*v - stats.sh_min[j]) / span - 0.5 - stats.mean_term(j);
        }
    }
}

pub fn normalize_sh_matrix(mut m: ShMatrix, stats: &ShStats) -> ShMatrix {
    let width = m.width;
    for row in m.data.chunks_exact_mut(width.max(1)) {
        normalize_sh_in_place(row, stats);
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainOptions {
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            learning_rate: DEFAULT_LEARNING_RATE,
            seed: DEFAULT_SEED,
        }
    }
}

/// Output layer weights: `classes` rows of `1 + hidden` values, bias first.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierWeights {
    v: Vec<f64>,
    classes: usize,
    inputs: usize,
    epochs: usize,
    seed: u64,
}

fn sigmoid(a: f64) -> f64 {
    1.0 / (1.0 + (-a).exp())
}

impl ClassifierWeights {
    /// Uniform initialization in `[-0.5, 0.5]` from a seeded ChaCha stream.
    pub fn initialize(classes: usize, hidden: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inputs = hidden + 1;
        let v = (0..classes * inputs)
            .map(|_| rng.random_range(-INIT_RANGE..=INIT_RANGE))
            .collect();
        ClassifierWeights {
            v,
            classes,
            inputs,
            epochs: 0,
            seed,
        }
    }

    pub fn from_raw(v: Vec<f64>, classes: usize, hidden: usize) -> Result<Self> {
        if v.len() != classes * (hidden + 1) {
            return Err(Error::Shape(format!(
                "{} weights do not form {classes} x {}",
                v.len(),
                hidden + 1
            )));
        }
        Ok(ClassifierWeights {
            v,
            classes,
            inputs: hidden + 1,
            epochs: 0,
            seed: 0,
        })
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn hidden(&self) -> usize {
        self.inputs - 1
    }

    pub fn epochs(&self) -> usize {
        self.epochs
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v
    }

    /// Sigmoid outputs `Sout` for one normalized hidden vector.
    pub fn outputs_into(&self, hidden: &[f64], out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate() {
            let row = &self.v[k * self.inputs..(k + 1) * self.inputs];
            *o = sigmoid(row[0] + dot(&row[1..], hidden));
        }
    }

    pub fn outputs(&self, hidden: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.classes];
        self.outputs_into(hidden, &mut out);
        out
    }

    pub fn predict(&self, hidden: &[f64]) -> usize {
        argmax(&self.outputs(hidden))
    }

    /// Squared-error loss `0.5 * sum (L - Sout)^2` of one sample and its
    /// gradient with respect to every weight, in storage order.
    pub fn sample_loss_gradient(&self, hidden: &[f64], label: usize) -> (f64, Vec<f64>) {
        let out = self.outputs(hidden);
        let mut loss = 0.0;
        let mut grad = vec![0.0; self.v.len()];
        for (k, &o) in out.iter().enumerate() {
            let target = if k == label { 1.0 } else { 0.0 };
            loss += 0.5 * (target - o) * (target - o);
            let delta = -(target - o) * o * (1.0 - o);
            let g = &mut grad[k * self.inputs..(k + 1) * self.inputs];
            g[0] = delta;
            for (gi, &h) in g[1..].iter_mut().zip(hidden) {
                *gi = delta * h;
            }
        }
        (loss, grad)
    }

    pub fn sample_loss(&self, hidden: &[f64], label: usize) -> f64 {
        self.outputs(hidden)
            .iter()
            .enumerate()
            .map(|(k, &o)| {
                let t = if k == label { 1.0 } else { 0.0 };
                0.5 * (t - o) * (t - o)
            })
            .sum()
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Epoch-by-epoch trainer so callers can read metrics at intermediate
/// epoch counts without retraining.
pub struct Trainer<'a> {
    weights: ClassifierWeights,
    hidden: &'a ShMatrix,
    labels: &'a [u8],
    learning_rate: f64,
    out: Vec<f64>,
}

impl<'a> Trainer<'a> {
    pub fn new(
        hidden: &'a ShMatrix,
        labels: &'a [u8],
        classes: usize,
        options: TrainOptions,
    ) -> Result<Self> {
        if hidden.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} hidden vectors but {} labels",
                hidden.len(),
                labels.len()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| usize::from(l) >= classes) {
            return Err(Error::Consistency(format!("label {l} outside [0, {classes})")));
        }
        Ok(Trainer {
            weights: ClassifierWeights::initialize(classes, hidden.width(), options.seed),
            hidden,
            labels,
            learning_rate: options.learning_rate,
            out: vec![0.0; classes],
        })
    }

    /// One pass over the training set in stored order.
    pub fn run_epoch(&mut self) -> Result<()> {
        let inputs = self.weights.inputs;
        for (h, &label) in self.hidden.rows().zip(self.labels) {
            self.weights.outputs_into(h, &mut self.out);
            for (k, &o) in self.out.iter().enumerate() {
                let target = if k == usize::from(label) { 1.0 } else { 0.0 };
                let step = self.learning_rate * (target - o) * o * (1.0 - o);
                let row = &mut self.weights.v[k * inputs..(k + 1) * inputs];
                row[0] += step;
                for (w, &x) in row[1..].iter_mut().zip(h) {
                    *w += step * x;
                }
            }
        }
        self.weights.epochs += 1;
        if self.weights.v.iter().any(|w| !w.is_finite()) {
            return Err(Error::TrainingDiverged {
                epoch: self.weights.epochs,
            });
        }
        Ok(())
    }

    pub fn weights(&self) -> &ClassifierWeights {
        &self.weights
    }

    pub fn into_weights(self) -> ClassifierWeights {
        self.weights
    }
}

/// Trains on already-normalized hidden vectors.
pub fn train_on_hidden(
    hidden: &ShMatrix,
    labels: &[u8],
    classes: usize,
    epochs: usize,
    options: TrainOptions,
) -> Result<ClassifierWeights> {
    if epochs == 0 {
        return Err(Error::domain("epoch count must be at least 1"));
    }
    let mut trainer = Trainer::new(hidden, labels, classes, options)?;
    for _ in 0..epochs {
        trainer.run_epoch()?;
    }
    Ok(trainer.into_weights())
}

/// Projects the training set through `reservoir`, normalizes with `stats`
/// and trains for `epochs`.
pub fn train_classifier(
    dataset: &LabeledDataset,
    reservoir: &ReservoirMatrix,
    stats: &ShStats,
    epochs: usize,
    options: TrainOptions,
) -> Result<ClassifierWeights> {
    let hidden = normalize_sh_matrix(compute_sh_matrix(reservoir, dataset, dataset.train())?, stats);
    train_on_hidden(
        &hidden,
        dataset.train().labels(),
        dataset.class_count(),
        epochs,
        options,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    /// R2 Efficiency: mean per-vector determination coefficient.
    R2E,
    /// Pearson Efficiency: mean per-vector correlation coefficient.
    PE,
    /// Classification accuracy.
    Acc,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [MetricKind::R2E, MetricKind::PE, MetricKind::Acc];
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::R2E => "R2E",
            MetricKind::PE => "PE",
            MetricKind::Acc => "Acc",
        })
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "r2e" | "r2" => Ok(MetricKind::R2E),
            "pe" => Ok(MetricKind::PE),
            "acc" => Ok(MetricKind::Acc),
            other => Err(Error::Config(format!("unknown metric '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub kind: MetricKind,
    pub value: f64,
}

/// `K x K` confusion matrix, rows are true classes.
pub fn confusion_matrix(
    weights: &ClassifierWeights,
    hidden: &ShMatrix,
    labels: &[u8],
) -> Result<Vec<Vec<usize>>> {
    check_test_set(hidden, labels)?;
    let k = weights.classes();
    let mut cm = vec![vec![0; k]; k];
    for (h, &l) in hidden.rows().zip(labels) {
        cm[usize::from(l)][weights.predict(h)] += 1;
    }
    Ok(cm)
}

/// Trace over total of a confusion matrix.
pub fn accuracy_from_confusion(cm: &[Vec<usize>]) -> Result<f64> {
    let total: usize = cm.iter().flatten().sum();
    if total == 0 {
        return Err(Error::domain("empty confusion matrix"));
    }
    let hits: usize = cm.iter().enumerate().map(|(i, r)| r[i]).sum();
    Ok(hits as f64 / total as f64)
}

pub fn accuracy(weights: &ClassifierWeights, hidden: &ShMatrix, labels: &[u8]) -> Result<MetricValue> {
    let cm = confusion_matrix(weights, hidden, labels)?;
    Ok(MetricValue {
        kind: MetricKind::Acc,
        value: accuracy_from_confusion(&cm)?,
    })
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Determination coefficient between a label vector and an output vector.
pub fn r2_single(label: &[f64], output: &[f64]) -> f64 {
    let l_mean = mean(label);
    let residual: f64 = label.iter().zip(output).map(|(l, s)| (l - s) * (l - s)).sum();
    let total: f64 = label.iter().map(|l| (l - l_mean) * (l - l_mean)).sum();
    1.0 - residual / total
}

/// Pearson correlation between a label vector and an output vector; `0.0`
/// when either has zero variance.
pub fn pearson_single(label: &[f64], output: &[f64]) -> f64 {
    let l_mean = mean(label);
    let s_mean = mean(output);
    let mut cov = 0.0;
    let mut var_l = 0.0;
    let mut var_s = 0.0;
    for (l, s) in label.iter().zip(output) {
        cov += (l - l_mean) * (s - s_mean);
        var_l += (l - l_mean) * (l - l_mean);
        var_s += (s - s_mean) * (s - s_mean);
    }
    if var_l == 0.0 || var_s == 0.0 {
        return 0.0;
    }
    cov / (var_l.sqrt() * var_s.sqrt())
}

fn check_test_set(hidden: &ShMatrix, labels: &[u8]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::domain("empty test set"));
    }
    if hidden.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} hidden vectors but {} labels",
            hidden.len(),
            labels.len()
        )));
    }
    Ok(())
}

fn mean_per_vector(
    weights: &ClassifierWeights,
    hidden: &ShMatrix,
    labels: &[u8],
    f: fn(&[f64], &[f64]) -> f64,
) -> Result<f64> {
    check_test_set(hidden, labels)?;
    let k = weights.classes();
    let mut out = vec![0.0; k];
    let mut onehot = vec![0.0; k];
    let mut sum = 0.0;
    for (h, &l) in hidden.rows().zip(labels) {
        weights.outputs_into(h, &mut out);
        onehot.fill(0.0);
        onehot[usize::from(l)] = 1.0;
        sum += f(&onehot, &out);
    }
    Ok(sum / labels.len() as f64)
}

pub fn r2_efficiency(weights: &ClassifierWeights, hidden: &ShMatrix, labels: &[u8]) -> Result<MetricValue> {
    Ok(MetricValue {
        kind: MetricKind::R2E,
        value: mean_per_vector(weights, hidden, labels, r2_single)?,
    })
}

pub fn pearson_efficiency(
    weights: &ClassifierWeights,
    hidden: &ShMatrix,
    labels: &[u8],
) -> Result<MetricValue> {
    Ok(MetricValue {
        kind: MetricKind::PE,
        value: mean_per_vector(weights, hidden, labels, pearson_single)?,
    })
}

pub fn evaluate_metric(
    kind: MetricKind,
    weights: &ClassifierWeights,
    hidden: &ShMatrix,
    labels: &[u8],
) -> Result<MetricValue> {
    match kind {
        MetricKind::Acc => accuracy(weights, hidden, labels),
        MetricKind::R2E => r2_efficiency(weights, hidden, labels),
        MetricKind::PE => pearson_efficiency(weights, hidden, labels),
    }
}
