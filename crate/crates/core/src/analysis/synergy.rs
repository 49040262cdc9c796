//! Synergy coefficient of a feature pair.

/// `(1 - max(a1, a2)) / (1.001 - a12)` for single-feature accuracies `a1`,
/// `a2` and paired accuracy `a12`. Values above 1 indicate synergy.
pub fn synergy(a1: f64, a2: f64, a12: f64) -> f64 {
    (1.0 - a1.max(a2)) / (1.001 - a12)
}
