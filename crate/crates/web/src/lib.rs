//! Browser bindings: bifurcation diagram, entropy against the map parameter
//! and band-pass filter response. Each export returns a flat `Float64Array`.

use std::cell::RefCell;
use std::sync::Arc;

use nneten::chaos::{bifurcation_scan, sine_map_series, SineMapConfig};
use nneten::dataset::{synthetic, DatasetKind};
use nneten::engine::{DataSource, Engine, NNetEnSettings};
use nneten::ref_entropy::{sample_entropy, SampEnParams};
use nneten::sigprep::{design_bandpass, FilterSpec};
use nneten::{FillMethod, MetricKind};
use wasm_bindgen::prelude::*;

/// Class size of the in-browser reference dataset.
const DEMO_PER_CLASS: usize = 150;

thread_local! {
    static ENGINE: RefCell<Option<(u64, Engine)>> = const { RefCell::new(None) };
}

fn with_engine<T>(seed: u64, f: impl FnOnce(&Engine) -> T) -> T {
    ENGINE.with(|cell| {
        let mut slot = cell.borrow_mut();
        if slot.as_ref().is_none_or(|(s, _)| *s != seed) {
            let d2 = Arc::new(synthetic::rbv1_standin_sized(DEMO_PER_CLASS, seed));
            let engine = Engine::new(DataSource::InMemory { d1: None, d2: Some(d2) });
            *slot = Some((seed, engine));
        }
        f(&slot.as_ref().expect("engine initialised").1)
    })
}

/// `steps` rows of `samples` post-transient values, row-major.
pub fn bifurcation_values(r_min: f64, r_max: f64, steps: usize, samples: usize) -> Result<Vec<f64>, String> {
    let cfg = SineMapConfig {
        series_length: samples,
        ..SineMapConfig::new(r_min)
    };
    let rows = bifurcation_scan(r_min, r_max, steps, &cfg).map_err(|e| e.to_string())?;
    Ok(rows.into_iter().flat_map(|row| row.samples).collect())
}

/// `[r, NNetEn, SampEn]` triples for `steps` values of `r`, one 300-point
/// series each, on the reduced stand-in of the blood-parameter dataset.
pub fn entropy_curve(
    r_min: f64,
    r_max: f64,
    steps: usize,
    method: u8,
    epochs: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let method = FillMethod::from_number(method).map_err(|e| e.to_string())?;
    let settings = NNetEnSettings {
        dataset: DatasetKind::D2,
        mu: 1.0,
        method,
        epochs,
        metric: MetricKind::Acc,
        seed,
    };
    let mut out = Vec::with_capacity(3 * steps);
    with_engine(seed, |engine| {
        for i in 0..steps {
            let r = if steps == 1 {
                r_min
            } else {
                r_min + (r_max - r_min) * i as f64 / (steps - 1) as f64
            };
            let x = sine_map_series(&SineMapConfig {
                series_count: 1,
                ..SineMapConfig::new(r)
            })
            .map_err(|e| e.to_string())?
            .remove(0);
            let h = engine.compute_nneten(&x, &settings).map_err(|e| e.to_string())?.value;
            let s = sample_entropy(&x, SampEnParams::default())
                .map_err(|e| e.to_string())?
                .unwrap_or(f64::NAN);
            out.extend([r, h, s]);
        }
        Ok(out)
    })
}

/// `[f, |H(f)|]` pairs on `points` frequencies from 0 to Nyquist.
pub fn filter_magnitude(order: usize, low_hz: f64, high_hz: f64, fs: f64, points: usize) -> Result<Vec<f64>, String> {
    let spec = FilterSpec {
        order,
        low_hz,
        high_hz,
        sample_rate_hz: fs,
    };
    let filter = design_bandpass(&spec).map_err(|e| e.to_string())?;
    let n = points.max(2);
    Ok((0..n)
        .flat_map(|i| {
            let f = fs / 2.0 * i as f64 / (n - 1) as f64;
            [f, filter.magnitude(f)]
        })
        .collect())
}

#[wasm_bindgen]
pub fn bifurcation(r_min: f64, r_max: f64, steps: usize, samples: usize) -> Result<Vec<f64>, JsValue> {
    bifurcation_values(r_min, r_max, steps, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn entropy_vs_r(r_min: f64, r_max: f64, steps: usize, method: u8, epochs: usize, seed: u64) -> Result<Vec<f64>, JsValue> {
    entropy_curve(r_min, r_max, steps, method, epochs, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn filter_response(order: usize, low_hz: f64, high_hz: f64, fs: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    filter_magnitude(order, low_hz, high_hz, fs, points).map_err(|e| JsValue::from_str(&e))
}
