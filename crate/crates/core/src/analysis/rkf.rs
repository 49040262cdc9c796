//! Repeated stratified K-fold accuracy of an RBF SVM with grid-searched
//! hyperparameters.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::svm::{svm_predict, svm_train, SvmParams};
use super::table::FeatureTable;
use crate::error::{Error, Result};

pub const C_GRID: [f64; 4] = [0.1, 1.0, 10.0, 100.0];
pub const GAMMA_GRID: [f64; 4] = [0.01, 0.1, 1.0, 10.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RkfConfig {
    pub k_folds: usize,
    pub n_repeats_search: usize,
    pub n_repeats_eval: usize,
    /// `(C, gamma)` candidates.
    pub hyper_grid: Vec<(f64, f64)>,
    pub seed: u64,
}

impl Default for RkfConfig {
    fn default() -> Self {
        RkfConfig {
            k_folds: 5,
            n_repeats_search: 5,
            n_repeats_eval: 10,
            hyper_grid: default_grid(),
            seed: 42,
        }
    }
}

pub fn default_grid() -> Vec<(f64, f64)> {
    C_GRID
        .iter()
        .flat_map(|&c| GAMMA_GRID.iter().map(move |&g| (c, g)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RkfResult {
    /// Mean test accuracy over the evaluation folds.
    pub accuracy: f64,
    pub c: f64,
    pub gamma: f64,
    /// Mean validation accuracy of the chosen pair during the search.
    pub search_accuracy: f64,
}

/// Fold index for every sample. Each class is shuffled and dealt round-robin,
/// continuing where the previous class stopped, so fold sizes differ by at
/// most one and per-class counts differ by at most one between folds.
pub fn stratified_folds(labels: &[usize], k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut fold_of = vec![0; labels.len()];
    let mut next = 0;
    for class in 0..classes {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(rng);
        for i in idx {
            fold_of[i] = next % k;
            next += 1;
        }
    }
    fold_of
}

/// Standardizes with the training rows' mean and population deviation
/// (a zero deviation leaves the column centred only).
fn standardize(train: &[Vec<f64>], other: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let width = train.first().map_or(0, Vec::len);
    let n = train.len() as f64;
    let mut mean = vec![0.0; width];
    let mut sd = vec![0.0; width];
    for c in 0..width {
        mean[c] = train.iter().map(|r| r[c]).sum::<f64>() / n;
        let var = train.iter().map(|r| (r[c] - mean[c]).powi(2)).sum::<f64>() / n;
        sd[c] = if var > 0.0 { var.sqrt() } else { 1.0 };
    }
    let apply = |rows: &[Vec<f64>]| -> Vec<Vec<f64>> {
        rows.iter()
            .map(|r| r.iter().enumerate().map(|(c, v)| (v - mean[c]) / sd[c]).collect())
            .collect()
    };
    (apply(train), apply(other))
}

fn fold_accuracy(table: &FeatureTable, folds: &[usize], fold: usize, params: SvmParams) -> Result<f64> {
    let mut train_x = Vec::new();
    let mut train_y = Vec::new();
    let mut test_x = Vec::new();
    let mut test_y = Vec::new();
    for (i, row) in table.rows().iter().enumerate() {
        if folds[i] == fold {
            test_x.push(row.clone());
            test_y.push(table.labels()[i]);
        } else {
            train_x.push(row.clone());
            train_y.push(table.labels()[i]);
        }
    }
    let (train_x, test_x) = standardize(&train_x, &test_x);
    let model = svm_train(&train_x, &train_y, params)?;
    let hits = svm_predict(&model, &test_x)
        .iter()
        .zip(&test_y)
        .filter(|(p, t)| p == t)
        .count();
    Ok(hits as f64 / test_y.len() as f64)
}

fn mean_accuracy(table: &FeatureTable, partitions: &[Vec<usize>], k: usize, params: SvmParams) -> Result<f64> {
    let mut total = 0.0;
    for folds in partitions {
        for fold in 0..k {
            total += fold_accuracy(table, folds, fold, params)?;
        }
    }
    Ok(total / (partitions.len() * k) as f64)
}

fn partitions(labels: &[usize], k: usize, repeats: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    (0..repeats).map(|_| stratified_folds(labels, k, rng)).collect()
}

/// Grid search over `(C, gamma)` on `n_repeats_search x k_folds` stratified
/// folds, then the mean accuracy of the chosen pair on `n_repeats_eval x
/// k_folds` fresh folds.
pub fn rkf_accuracy(table: &FeatureTable, config: &RkfConfig) -> Result<RkfResult> {
    let k = config.k_folds;
    if k < 2 {
        return Err(Error::domain("need at least two folds"));
    }
    if config.hyper_grid.is_empty() || config.n_repeats_search == 0 || config.n_repeats_eval == 0 {
        return Err(Error::domain("empty hyperparameter grid or zero repeats"));
    }
    let mut counts = vec![0usize; table.class_count()];
    for &l in table.labels() {
        counts[l] += 1;
    }
    let present: Vec<usize> = counts.iter().copied().filter(|&c| c > 0).collect();
    if present.len() != 2 {
        return Err(Error::domain(format!(
            "A_RKF needs exactly two classes, got {}",
            present.len()
        )));
    }
    if let Some(&c) = present.iter().find(|&&c| c < k) {
        return Err(Error::domain(format!(
            "a class has {c} samples, fewer than the {k} folds"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let search = partitions(table.labels(), k, config.n_repeats_search, &mut rng);
    let eval = partitions(table.labels(), k, config.n_repeats_eval, &mut rng);

    let score = |&(c, gamma): &(f64, f64)| mean_accuracy(table, &search, k, SvmParams::new(c, gamma));
    #[cfg(feature = "parallel")]
    let scores: Vec<f64> = {
        use rayon::prelude::*;
        config.hyper_grid.par_iter().map(score).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let scores: Vec<f64> = config.hyper_grid.iter().map(score).collect::<Result<_>>()?;

    // first maximum in grid order
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    let (c, gamma) = config.hyper_grid[best];
    let accuracy = mean_accuracy(table, &eval, k, SvmParams::new(c, gamma))?;
    Ok(RkfResult {
        accuracy,
        c,
        gamma,
        search_accuracy: scores[best],
    })
}
