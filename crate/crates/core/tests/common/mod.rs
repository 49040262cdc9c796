//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sample entropy by explicit template construction.
pub fn naive_sampen(x: &[f64], m: usize, r_factor: f64) -> Option<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let sd = (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0)).sqrt();
    let tol = r_factor * sd;
    let count = |len: usize| -> u64 {
        let templates: Vec<&[f64]> = (0..n - m).map(|i| &x[i..i + len]).collect();
        let mut c = 0;
        for i in 0..templates.len() {
            for j in 0..templates.len() {
                if i == j {
                    continue;
                }
                let d = templates[i]
                    .iter()
                    .zip(templates[j])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if d <= tol {
                    c += 1;
                }
            }
        }
        c / 2
    };
    let (b, a) = (count(m), count(m + 1));
    if a == 0 || b == 0 {
        None
    } else {
        Some(-(a as f64 / b as f64).ln())
    }
}

/// SVD entropy for embedding dimension 2 from the closed-form eigenvalues
/// of the 2x2 Gram matrix.
pub fn closed_form_svden2(x: &[f64]) -> f64 {
    let (mut p, mut q, mut s) = (0.0, 0.0, 0.0);
    for w in x.windows(2) {
        p += w[0] * w[0];
        q += w[1] * w[1];
        s += w[0] * w[1];
    }
    let tr = p + q;
    let disc = ((p - q) * (p - q) + 4.0 * s * s).sqrt();
    let l1 = ((tr + disc) / 2.0).max(0.0);
    let l2 = ((tr - disc) / 2.0).max(0.0);
    let (s1, s2) = (l1.sqrt(), l2.sqrt());
    let total = s1 + s2;
    if total == 0.0 {
        return 0.0;
    }
    [s1, s2]
        .iter()
        .map(|s| s / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

pub fn seeded_series(seed: u64, min_len: usize, max_len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.random_range(min_len..=max_len);
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Series with repeated values so that template matches actually occur.
pub fn seeded_coarse_series(seed: u64, min_len: usize, max_len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.random_range(min_len..=max_len);
    (0..len).map(|_| f64::from(rng.random_range(0..4u8))).collect()
}
