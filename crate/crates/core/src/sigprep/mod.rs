//! EEG-style preprocessing: band-pass filtering and db4 wavelet bands.

mod butterworth;
mod dwt;

pub use butterworth::{
    butterworth_bandpass, design_bandpass, Biquad, FilterMode, FilterSpec, SosFilter,
};
pub use dwt::{
    component_signal, dwt_db4, dwt_db4_with, dwt_step, idwt_step, Boundary, Component,
    DwtDecomposition, SignalVariants, DB4_REC_LO, DEFAULT_LEVELS,
};

use crate::error::Result;

/// Filters `raw` with `spec` and decomposes the filtered signal.
pub fn prepare_signal(raw: &[f64], spec: &FilterSpec, mode: FilterMode, levels: usize) -> Result<SignalVariants> {
    let filtered = butterworth_bandpass(raw, spec, mode)?;
    let decomposition = dwt_db4(&filtered, levels)?;
    Ok(SignalVariants {
        raw: raw.to_vec(),
        filtered,
        decomposition,
    })
}
