//! Sine-map signal classes: `x[n+1] = r * sin(pi * x[n])`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const R_MIN: f64 = 0.7;
pub const R_MAX: f64 = 2.0;

/// Pair A: two chaotic regimes that are hard to tell apart.
pub const PAIR_A: (f64, f64) = (1.1918, 1.2243);
/// Pair B: a periodic and a chaotic regime.
pub const PAIR_B: (f64, f64) = (1.7161, 1.7551);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineMapConfig {
    pub r: f64,
    pub x_start: f64,
    pub burn_in: usize,
    pub series_length: usize,
    pub series_count: usize,
}

impl SineMapConfig {
    /// 100 series of 300 points after a 1000-step transient from `x = 0.1`.
    pub fn new(r: f64) -> Self {
        SineMapConfig {
            r,
            x_start: 0.1,
            burn_in: 1000,
            series_length: 300,
            series_count: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_r(self.r)?;
        if self.series_length == 0 {
            return Err(Error::domain("series length must be at least 1"));
        }
        if !self.x_start.is_finite() {
            return Err(Error::domain("starting value must be finite"));
        }
        Ok(())
    }
}

fn check_r(r: f64) -> Result<()> {
    if (R_MIN..=R_MAX).contains(&r) {
        Ok(())
    } else {
        Err(Error::domain(format!("r = {r} outside [{R_MIN}, {R_MAX}]")))
    }
}

pub fn sine_map_step(r: f64, x: f64) -> f64 {
    r * (PI * x).sin()
}

/// The orbit after the transient: `x_1, x_2, ..., x_len`.
///
/// The first `burn_in` values (`x_{-999}` through `x_0` for the default
/// configuration, the starting value included) are discarded.
pub fn orbit(r: f64, x_start: f64, burn_in: usize, len: usize) -> Vec<f64> {
    let mut x = x_start;
    for _ in 1..burn_in {
        x = sine_map_step(r, x);
    }
    let mut out = Vec::with_capacity(len);
    if burn_in == 0 {
        out.push(x);
    }
    while out.len() < len {
        x = sine_map_step(r, x);
        out.push(x);
    }
    out.truncate(len);
    out
}

/// `series_count` consecutive, non-overlapping windows of the orbit.
pub fn sine_map_series(config: &SineMapConfig) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    let total = config.series_length * config.series_count;
    let x = orbit(config.r, config.x_start, config.burn_in, total);
    Ok(x.chunks_exact(config.series_length)
        .map(<[f64]>::to_vec)
        .collect())
}

/// Post-transient samples for each of `steps` evenly spaced `r` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationRow {
    pub r: f64,
    pub samples: Vec<f64>,
}

pub fn bifurcation_scan(
    r_min: f64,
    r_max: f64,
    steps: usize,
    config: &SineMapConfig,
) -> Result<Vec<BifurcationRow>> {
    check_r(r_min)?;
    check_r(r_max)?;
    if r_min > r_max {
        return Err(Error::domain("r_min exceeds r_max"));
    }
    if steps == 0 {
        return Err(Error::domain("bifurcation scan needs at least one step"));
    }
    let rows = (0..steps)
        .map(|i| {
            let r = if steps == 1 {
                r_min
            } else {
                r_min + (r_max - r_min) * i as f64 / (steps - 1) as f64
            };
            BifurcationRow {
                r,
                samples: orbit(r, config.x_start, config.burn_in, config.series_length),
            }
        })
        .collect();
    Ok(rows)
}

/// Long-run behaviour of an orbit segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    FixedPoint,
    Periodic(usize),
    /// No period up to the search limit.
    Aperiodic,
}

/// Smallest `p <= max_period` with `|x[n+p] - x[n]| <= tol` over the whole
/// segment.
pub fn classify_regime(samples: &[f64], max_period: usize, tol: f64) -> Regime {
    for p in 1..=max_period.min(samples.len().saturating_sub(1)) {
        if samples.windows(p + 1).all(|w| (w[p] - w[0]).abs() <= tol) {
            return if p == 1 {
                Regime::FixedPoint
            } else {
                Regime::Periodic(p)
            };
        }
    }
    Regime::Aperiodic
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_iterate() {
        let x = orbit(1.0, 0.1, 0, 2);
        assert_eq!(x[0], 0.1);
        assert!((x[1] - 0.309_016_994_374_947_4).abs() < 1e-12);
        let cfg = SineMapConfig {
            burn_in: 0,
            series_length: 1,
            series_count: 1,
            ..SineMapConfig::new(1.3)
        };
        assert_eq!(sine_map_series(&cfg).unwrap(), vec![vec![0.1]]);
        let cfg = SineMapConfig { burn_in: 1, ..cfg };
        let s = sine_map_series(&cfg).unwrap();
        assert!((s[0][0] - 1.3 * (0.1 * PI).sin()).abs() < 1e-15);
    }

    #[test]
    fn windows_are_contiguous() {
        let cfg = SineMapConfig {
            series_count: 4,
            series_length: 30,
            ..SineMapConfig::new(1.2243)
        };
        let windows = sine_map_series(&cfg).unwrap();
        let whole = orbit(cfg.r, cfg.x_start, cfg.burn_in, 120);
        assert_eq!(windows.concat(), whole);
        // series k starts at orbit index (k - 1) * N + 1
        assert_eq!(windows[2][0], whole[60]);
    }

    #[test]
    fn default_burn_in_discards_thousand_values() {
        // x_{-999} = 0.1, so x_1 is the 1000th application of the map
        let mut x = 0.1;
        for _ in 0..1000 {
            x = sine_map_step(1.5, x);
        }
        assert_eq!(orbit(1.5, 0.1, 1000, 1)[0], x);
    }

    #[test]
    fn r_domain() {
        assert!(sine_map_series(&SineMapConfig::new(0.69)).is_err());
        assert!(sine_map_series(&SineMapConfig::new(2.01)).is_err());
        assert!(bifurcation_scan(0.5, 1.0, 3, &SineMapConfig::new(1.0)).is_err());
    }

    #[test]
    fn bounded() {
        for r in [0.7, 1.0, 1.5, 1.7551, 2.0] {
            assert!(orbit(r, 0.1, 10, 5000).iter().all(|x| x.abs() <= r));
        }
    }

    #[test]
    fn regimes() {
        let fixed = orbit(0.7, 0.1, 1000, 200);
        assert_eq!(classify_regime(&fixed, 32, 1e-6), Regime::FixedPoint);
        let max_spread = fixed.iter().fold(0.0f64, |m, x| m.max((x - fixed[0]).abs()));
        assert!(max_spread < 1e-6);

        // the fixed point loses stability below r = 0.72; r = 0.8 alternates
        let low = orbit(0.8, 0.1, 1000, 200);
        assert_eq!(classify_regime(&low, 32, 1e-6), Regime::Periodic(2));

        let periodic = orbit(PAIR_B.0, 0.1, 1000, 300);
        assert_eq!(classify_regime(&periodic, 32, 1e-6), Regime::Periodic(6));

        let chaotic = orbit(PAIR_B.1, 0.1, 1000, 300);
        assert_eq!(classify_regime(&chaotic, 32, 1e-6), Regime::Aperiodic);
    }

    #[test]
    fn scan_rows() {
        let rows = bifurcation_scan(0.8, 1.8, 11, &SineMapConfig::new(1.0)).unwrap();
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[0].r, 0.8);
        assert!((rows[10].r - 1.8).abs() < 1e-12);
        assert!(rows.iter().all(|row| row.samples.len() == 300));
    }
}
