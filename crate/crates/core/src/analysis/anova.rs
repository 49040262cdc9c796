//! One-way analysis of variance.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::error::{Error, Result};

/// The F statistic, with the degenerate zero-denominator cases flagged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum FStatistic {
    Finite(f64),
    /// Zero within-group variance, distinct group means.
    Infinite,
    /// Zero within- and between-group variance.
    Undefined,
}

impl FStatistic {
    pub fn finite(self) -> Option<f64> {
        match self {
            FStatistic::Finite(f) => Some(f),
            _ => None,
        }
    }

    /// Ranking key: infinite above every finite value, undefined below.
    pub fn score(self) -> f64 {
        match self {
            FStatistic::Finite(f) => f,
            FStatistic::Infinite => f64::INFINITY,
            FStatistic::Undefined => f64::NEG_INFINITY,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FStatistic::Finite(_) => "finite",
            FStatistic::Infinite => "infinite",
            FStatistic::Undefined => "undefined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FRatioResult {
    pub f: FStatistic,
    pub df_between: usize,
    pub df_within: usize,
    pub p_value: f64,
    pub ss_between: f64,
    pub ss_within: f64,
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn f_ratio<G: AsRef<[f64]>>(groups: &[G]) -> Result<FRatioResult> {
    if groups.len() < 2 {
        return Err(Error::domain("F-ratio needs at least two groups"));
    }
    if let Some(i) = groups.iter().position(|g| g.as_ref().len() < 2) {
        return Err(Error::domain(format!(
            "group {i} has {} observations, need at least 2",
            groups[i].as_ref().len()
        )));
    }
    if groups.iter().any(|g| g.as_ref().iter().any(|v| !v.is_finite())) {
        return Err(Error::domain("F-ratio input contains a non-finite value"));
    }
    let total: usize = groups.iter().map(|g| g.as_ref().len()).sum();
    let grand = groups.iter().flat_map(|g| g.as_ref()).sum::<f64>() / total as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for g in groups {
        let g = g.as_ref();
        let m = mean(g);
        ss_between += g.len() as f64 * (m - grand) * (m - grand);
        ss_within += g.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    }
    let df_between = groups.len() - 1;
    let df_within = total - groups.len();
    let (f, p_value) = if ss_within > 0.0 {
        let f = (ss_between / df_between as f64) / (ss_within / df_within as f64);
        let dist = FisherSnedecor::new(df_between as f64, df_within as f64)
            .map_err(|e| Error::domain(format!("F distribution: {e}")))?;
        (FStatistic::Finite(f), dist.sf(f).clamp(0.0, 1.0))
    } else if ss_between > 0.0 {
        (FStatistic::Infinite, 0.0)
    } else {
        (FStatistic::Undefined, 1.0)
    };
    Ok(FRatioResult {
        f,
        df_between,
        df_within,
        p_value,
        ss_between,
        ss_within,
    })
}

/// Splits `values` into groups by class index `0..classes`.
pub fn group_by_label(values: &[f64], labels: &[usize], classes: usize) -> Result<Vec<Vec<f64>>> {
    if values.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} values but {} labels",
            values.len(),
            labels.len()
        )));
    }
    let mut groups = vec![Vec::new(); classes];
    for (&v, &l) in values.iter().zip(labels) {
        groups
            .get_mut(l)
            .ok_or_else(|| Error::domain(format!("label {l} outside 0..{classes}")))?
            .push(v);
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_example() {
        let r = f_ratio(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(r.f, FStatistic::Finite(13.5));
        assert_eq!(r.ss_between, 13.5);
        assert_eq!(r.ss_within, 4.0);
        assert_eq!((r.df_between, r.df_within), (1, 4));
        // F(1, 4) survival at 13.5
        assert!((r.p_value - 0.021_311_641_128_756_723).abs() < 1e-9, "{}", r.p_value);
    }

    #[test]
    fn degenerate_cases() {
        let same = f_ratio(&[vec![1.0, 2.0, 4.0], vec![1.0, 2.0, 4.0]]).unwrap();
        assert_eq!(same.f, FStatistic::Finite(0.0));
        assert_eq!(same.p_value, 1.0);
        let inf = f_ratio(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(inf.f, FStatistic::Infinite);
        let undef = f_ratio(&[vec![0.0; 3], vec![0.0; 4]]).unwrap();
        assert_eq!(undef.f, FStatistic::Undefined);
        assert!(f_ratio(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        assert!(f_ratio(&[vec![1.0, 2.0]]).is_err());
        assert!(f_ratio(&[vec![1.0, f64::NAN], vec![3.0, 4.0]]).is_err());
    }

    #[test]
    fn grouping() {
        let g = group_by_label(&[1.0, 2.0, 3.0], &[1, 0, 1], 2).unwrap();
        assert_eq!(g, vec![vec![2.0], vec![1.0, 3.0]]);
        assert!(group_by_label(&[1.0], &[2], 2).is_err());
        assert!(group_by_label(&[1.0], &[], 2).is_err());
    }
}
