//! Digital Butterworth band-pass design (bilinear transform with frequency
//! prewarping) in second-order sections, plus zero-phase filtering.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub order: usize,
    pub low_hz: f64,
    pub high_hz: f64,
    pub sample_rate_hz: f64,
}

impl Default for FilterSpec {
    fn default() -> Self {
        FilterSpec {
            order: 5,
            low_hz: 0.5,
            high_hz: 32.0,
            sample_rate_hz: 500.0,
        }
    }
}

impl FilterSpec {
    pub fn validate(&self) -> Result<()> {
        let nyquist = self.sample_rate_hz / 2.0;
        if self.order == 0 {
            return Err(Error::domain("filter order must be at least 1"));
        }
        if !(0.0 < self.low_hz && self.low_hz < self.high_hz && self.high_hz < nyquist) {
            return Err(Error::domain(format!(
                "band {}..{} Hz invalid for sample rate {} Hz",
                self.low_hz, self.high_hz, self.sample_rate_hz
            )));
        }
        Ok(())
    }
}

/// `b0 + b1 z^-1 + b2 z^-2` over `1 + a1 z^-1 + a2 z^-2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 3],
}

impl Biquad {
    fn response(&self, z_inv: Complex64) -> Complex64 {
        let z2 = z_inv * z_inv;
        (self.b[0] + z_inv * self.b[1] + z2 * self.b[2])
            / (self.a[0] + z_inv * self.a[1] + z2 * self.a[2])
    }

    /// Transposed direct form II state for a unit step held forever.
    fn step_state(&self) -> [f64; 2] {
        let dc = self.b.iter().sum::<f64>() / self.a.iter().sum::<f64>();
        let z2 = self.b[2] - self.a[2] * dc;
        let z1 = self.b[1] - self.a[1] * dc + z2;
        [z1, z2]
    }

    fn dc_gain(&self) -> f64 {
        self.b.iter().sum::<f64>() / self.a.iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SosFilter {
    pub sections: Vec<Biquad>,
    pub sample_rate_hz: f64,
}

/// Filtering direction mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterMode {
    /// Forward then backward pass, zero phase, squared magnitude.
    #[default]
    ZeroPhase,
    SinglePass,
}

pub fn design_bandpass(spec: &FilterSpec) -> Result<SosFilter> {
    spec.validate()?;
    let fs = spec.sample_rate_hz;
    let n = spec.order;
    let warp = |f: f64| 2.0 * fs * (PI * f / fs).tan();
    let (w1, w2) = (warp(spec.low_hz), warp(spec.high_hz));
    let bw = w2 - w1;
    let w0_sq = w1 * w2;

    // analog low-pass prototype poles -> band-pass poles -> z plane
    let mut poles = Vec::with_capacity(2 * n);
    for k in 0..n {
        let theta = PI * (2 * k + n + 1) as f64 / (2 * n) as f64;
        let p = Complex64::from_polar(1.0, theta);
        let pb = p * bw;
        let disc = (pb * pb - 4.0 * w0_sq).sqrt();
        for s in [(pb + disc) / 2.0, (pb - disc) / 2.0] {
            poles.push((2.0 * fs + s) / (2.0 * fs - s));
        }
    }

    let scale = poles.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let eps = 1e-12 * scale;
    let mut complex: Vec<Complex64> = poles.iter().copied().filter(|p| p.im > eps).collect();
    let mut real: Vec<f64> = poles.iter().filter(|p| p.im.abs() <= eps).map(|p| p.re).collect();
    complex.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    real.sort_by(f64::total_cmp);
    if real.len() % 2 != 0 || complex.len() * 2 + real.len() != 2 * n {
        return Err(Error::domain("pole pairing failed for this band"));
    }

    let numerator = [1.0, 0.0, -1.0];
    let mut sections: Vec<Biquad> = complex
        .iter()
        .map(|p| Biquad {
            b: numerator,
            a: [1.0, -2.0 * p.re, p.norm_sqr()],
        })
        .collect();
    for pair in real.chunks_exact(2) {
        sections.push(Biquad {
            b: numerator,
            a: [1.0, -(pair[0] + pair[1]), pair[0] * pair[1]],
        });
    }

    let mut filter = SosFilter {
        sections,
        sample_rate_hz: fs,
    };
    // unit gain at the digital image of the geometric centre frequency
    let center_hz = fs / PI * (w0_sq.sqrt() / (2.0 * fs)).atan();
    let g = 1.0 / filter.magnitude(center_hz);
    for b in filter.sections[0].b.iter_mut() {
        *b *= g;
    }
    Ok(filter)
}

impl SosFilter {
    pub fn response(&self, freq_hz: f64) -> Complex64 {
        let omega = 2.0 * PI * freq_hz / self.sample_rate_hz;
        let z_inv = Complex64::from_polar(1.0, -omega);
        self.sections
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, s| acc * s.response(z_inv))
    }

    /// `|H(f)|` of one pass.
    pub fn magnitude(&self, freq_hz: f64) -> f64 {
        self.response(freq_hz).norm()
    }

    /// Causal filtering from the given per-section states.
    fn run(&self, x: &[f64], mut state: Vec<[f64; 2]>) -> Vec<f64> {
        let mut y = x.to_vec();
        for (s, z) in self.sections.iter().zip(state.iter_mut()) {
            for v in y.iter_mut() {
                let input = *v;
                let out = s.b[0] * input + z[0];
                z[0] = s.b[1] * input - s.a[1] * out + z[1];
                z[1] = s.b[2] * input - s.a[2] * out;
                *v = out;
            }
        }
        y
    }

    /// Single causal pass from rest.
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        self.run(x, vec![[0.0; 2]; self.sections.len()])
    }

    /// Steady-state initial conditions for a step of height `x0`.
    fn initial_state(&self, x0: f64) -> Vec<[f64; 2]> {
        let mut scale = x0;
        self.sections
            .iter()
            .map(|s| {
                let [z1, z2] = s.step_state();
                let st = [z1 * scale, z2 * scale];
                scale *= s.dc_gain();
                st
            })
            .collect()
    }

    /// Forward-backward filtering with odd extension at both ends and
    /// steady-state initial conditions.
    pub fn filtfilt(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let pad = (3 * (2 * self.sections.len() + 1)).min(n.saturating_sub(1));
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));

        let fwd = self.run(&ext, self.initial_state(ext[0]));
        let mut rev: Vec<f64> = fwd.into_iter().rev().collect();
        let zi = self.initial_state(rev[0]);
        rev = self.run(&rev, zi);
        rev.reverse();
        rev[pad..pad + n].to_vec()
    }
}

/// Band-pass filters `signal` with a Butterworth design for `spec`.
pub fn butterworth_bandpass(signal: &[f64], spec: &FilterSpec, mode: FilterMode) -> Result<Vec<f64>> {
    let filter = design_bandpass(spec)?;
    if signal.len() <= 3 * spec.order {
        return Err(Error::domain(format!(
            "signal of length {} too short for an order-{} filter",
            signal.len(),
            spec.order
        )));
    }
    Ok(match mode {
        FilterMode::ZeroPhase => filter.filtfilt(signal),
        FilterMode::SinglePass => filter.filter(signal),
    })
}
