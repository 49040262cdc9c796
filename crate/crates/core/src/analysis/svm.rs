//! Binary soft-margin SVM with an RBF kernel, trained by sequential minimal
//! optimization with second-order working-set selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const KKT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    pub gamma: f64,
    pub tolerance: f64,
    /// `None` uses `max(1_000_000, 100 * n)`.
    pub max_iterations: Option<usize>,
}

impl SvmParams {
    pub fn new(c: f64, gamma: f64) -> Self {
        SvmParams {
            c,
            gamma,
            tolerance: KKT_TOLERANCE,
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    support: Vec<Vec<f64>>,
    /// `alpha_i * y_i` per support vector.
    coef: Vec<f64>,
    rho: f64,
    gamma: f64,
    /// Class labels mapped to `-1` and `+1`.
    classes: [usize; 2],
    pub iterations: usize,
}

fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d).exp()
}

pub fn svm_train(features: &[Vec<f64>], labels: &[usize], params: SvmParams) -> Result<SvmModel> {
    let n = features.len();
    if labels.len() != n {
        return Err(Error::Shape(format!("{n} samples but {} labels", labels.len())));
    }
    if !(params.c > 0.0 && params.gamma > 0.0 && params.tolerance > 0.0) {
        return Err(Error::domain("SVM needs C > 0, gamma > 0 and tolerance > 0"));
    }
    let width = features.first().map_or(0, Vec::len);
    if features.iter().any(|f| f.len() != width) {
        return Err(Error::Shape("feature rows differ in length".into()));
    }
    let mut distinct: Vec<usize> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != 2 {
        return Err(Error::domain(format!(
            "SVM needs exactly two classes, got {}",
            distinct.len()
        )));
    }
    let classes = [distinct[0], distinct[1]];
    let y: Vec<f64> = labels
        .iter()
        .map(|&l| if l == classes[1] { 1.0 } else { -1.0 })
        .collect();

    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = rbf(&features[i], &features[j], params.gamma);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    let q = |i: usize, j: usize| y[i] * y[j] * k[i * n + j];

    let c = params.c;
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let cap = params.max_iterations.unwrap_or((100 * n).max(1_000_000));
    let mut iterations = 0;

    let in_up = |a: f64, yt: f64| (yt > 0.0 && a < c) || (yt < 0.0 && a > 0.0);
    let in_low = |a: f64, yt: f64| (yt < 0.0 && a < c) || (yt > 0.0 && a > 0.0);

    loop {
        let mut i = usize::MAX;
        let mut g_max = f64::NEG_INFINITY;
        for t in 0..n {
            if in_up(alpha[t], y[t]) && -y[t] * grad[t] > g_max {
                g_max = -y[t] * grad[t];
                i = t;
            }
        }
        let mut j = usize::MAX;
        let mut g_min = f64::INFINITY;
        let mut best = f64::INFINITY;
        for t in 0..n {
            if !in_low(alpha[t], y[t]) {
                continue;
            }
            let v = -y[t] * grad[t];
            g_min = g_min.min(v);
            if i != usize::MAX && v < g_max {
                let b = g_max - v;
                let a = k[i * n + i] + k[t * n + t] - 2.0 * k[i * n + t];
                let a = if a > 0.0 { a } else { 1e-12 };
                let obj = -b * b / a;
                if obj < best {
                    best = obj;
                    j = t;
                }
            }
        }
        if i == usize::MAX || j == usize::MAX || g_max - g_min < params.tolerance {
            break;
        }
        if iterations >= cap {
            return Err(Error::Convergence { iterations });
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let quad = {
            let a = k[i * n + i] + k[j * n + j] - 2.0 * k[i * n + j];
            if a > 0.0 { a } else { 1e-12 }
        };
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += q(t, i) * di + q(t, j) * dj;
        }
    }

    // bias from free vectors, else midpoint of the feasible interval
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum, mut free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 { ub = ub.min(yg) } else { lb = lb.max(yg) }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 { ub = ub.min(yg) } else { lb = lb.max(yg) }
        } else {
            free += 1;
            sum += yg;
        }
    }
    let rho = if free > 0 { sum / free as f64 } else { (ub + lb) / 2.0 };

    let (support, coef) = (0..n)
        .filter(|&t| alpha[t] > 0.0)
        .map(|t| (features[t].clone(), alpha[t] * y[t]))
        .unzip();
    Ok(SvmModel {
        support,
        coef,
        rho,
        gamma: params.gamma,
        classes,
        iterations,
    })
}

impl SvmModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.support
            .iter()
            .zip(&self.coef)
            .map(|(s, c)| c * rbf(s, x, self.gamma))
            .sum::<f64>()
            - self.rho
    }

    pub fn predict_one(&self, x: &[f64]) -> usize {
        if self.decision(x) > 0.0 {
            self.classes[1]
        } else {
            self.classes[0]
        }
    }

    pub fn support_count(&self) -> usize {
        self.support.len()
    }
}

pub fn svm_predict(model: &SvmModel, features: &[Vec<f64>]) -> Vec<usize> {
    features.iter().map(|x| model.predict_one(x)).collect()
}
