//! Separation statistics: ANOVA, SVM accuracy under repeated K-fold,
//! synergy, settings sweeps and the EEG feature pipeline.

pub mod anova;
pub mod eeg;
pub mod rkf;
pub mod svm;
pub mod sweep;
pub mod synergy;
pub mod table;

pub use anova::{f_ratio, group_by_label, FRatioResult, FStatistic};
pub use eeg::{eeg_features, read_channels_csv, EegConfig, EegFeatures, EntropyMeasure, Recording};
pub use rkf::{rkf_accuracy, stratified_folds, RkfConfig, RkfResult};
pub use svm::{svm_predict, svm_train, SvmModel, SvmParams};
pub use sweep::{
    all_nsets, difference_grid, entropy_sweep, grid_peak, mean_and_std, nset_label, write_grid_csv,
    write_sweep_csv, EntropySweep, SweepRow,
};
pub use synergy::synergy;
pub use table::FeatureTable;
