//! Neural network entropy (NNetEn) of time series.
//!
//! A series fills the reservoir matrix of a LogNNet-style classifier; the
//! classification quality reached on a reference dataset is the entropy.

pub mod analysis;
pub mod chaos;
pub mod dataset;
pub mod engine;
pub mod error;
pub mod lognnet;
pub mod ref_entropy;
pub mod reservoir;
pub mod sigprep;

pub use engine::{Engine, EntropyResult, NNetEnSettings};
pub use error::{Error, Result};
pub use lognnet::MetricKind;
pub use reservoir::FillMethod;
