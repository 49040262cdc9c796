//! Sample entropy and singular-value-decomposition entropy.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampEnParams {
    /// Embedding dimension.
    pub m: usize,
    /// Tolerance as a multiple of the sample standard deviation.
    pub r_factor: f64,
}

impl Default for SampEnParams {
    fn default() -> Self {
        SampEnParams { m: 2, r_factor: 0.2 }
    }
}

/// Matching template pair counts at lengths `m` (`b`) and `m + 1` (`a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TemplateMatches {
    pub b: u64,
    pub a: u64,
}

impl TemplateMatches {
    /// `-ln(A / B)`, or `None` when either count is zero.
    pub fn entropy(self) -> Option<f64> {
        if self.a == 0 || self.b == 0 {
            None
        } else {
            Some(-(self.a as f64 / self.b as f64).ln())
        }
    }
}

/// Sample standard deviation (`n - 1` denominator).
pub fn sample_std(series: &[f64]) -> f64 {
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let ss: f64 = series.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}

/// Counts template pairs `i < j` whose Chebyshev distance is within `tol`.
///
/// Both lengths use the same `N - m` starting positions, so every
/// `m + 1` match extends an `m` match; self-matches are excluded.
pub fn count_template_matches(series: &[f64], m: usize, tol: f64) -> TemplateMatches {
    let n = series.len();
    let templates = n.saturating_sub(m);
    let mut b = 0;
    let mut a = 0;
    for i in 0..templates {
        for j in i + 1..templates {
            let within = (0..m).all(|k| (series[i + k] - series[j + k]).abs() <= tol);
            if within {
                b += 1;
                if (series[i + m] - series[j + m]).abs() <= tol {
                    a += 1;
                }
            }
        }
    }
    TemplateMatches { b, a }
}

/// Sample entropy with tolerance `r_factor * sample_std(series)`.
///
/// Returns `Ok(None)` when no template pair matches at length `m` or `m + 1`
/// (the entropy is undefined there).
pub fn sample_entropy(series: &[f64], params: SampEnParams) -> Result<Option<f64>> {
    if params.m == 0 || !(params.r_factor > 0.0) {
        return Err(Error::domain("SampEn needs m >= 1 and r_factor > 0"));
    }
    if series.len() <= params.m + 1 {
        return Err(Error::domain(format!(
            "SampEn with m = {} needs more than {} samples, got {}",
            params.m,
            params.m + 1,
            series.len()
        )));
    }
    let tol = params.r_factor * sample_std(series);
    Ok(count_template_matches(series, params.m, tol).entropy())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvdEnParams {
    pub m: usize,
    pub delay: usize,
    /// Divide by `ln m` so the result lies in `[0, 1]`.
    pub normalize: bool,
}

impl Default for SvdEnParams {
    fn default() -> Self {
        SvdEnParams {
            m: 2,
            delay: 1,
            normalize: false,
        }
    }
}

/// Shannon entropy (natural log) of the normalized singular values of the
/// delay-embedding matrix.
pub fn svd_entropy(series: &[f64], params: SvdEnParams) -> Result<f64> {
    let SvdEnParams { m, delay, normalize } = params;
    if m < 2 || delay < 1 {
        return Err(Error::domain("SVDEn needs m >= 2 and delay >= 1"));
    }
    let span = (m - 1) * delay;
    if series.len() <= span {
        return Err(Error::domain(format!(
            "SVDEn with m = {m}, delay = {delay} needs more than {span} samples"
        )));
    }
    let rows = series.len() - span;
    let embed = DMatrix::from_fn(rows, m, |i, k| series[i + k * delay]);
    let sigma = embed.singular_values();
    // singular values below the numerical rank threshold count as zero
    let cutoff = sigma.max() * rows as f64 * f64::EPSILON;
    let total: f64 = sigma.iter().filter(|&&s| s > cutoff).sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    let h: f64 = sigma
        .iter()
        .filter(|&&s| s > cutoff)
        .map(|s| s / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    Ok(if normalize { h / (m as f64).ln() } else { h })
}
