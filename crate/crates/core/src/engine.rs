//! End-to-end entropy evaluation, the `Nset` settings codec and the log file.

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::dataset::{
    load_mnist, load_rbv1, synthetic, BoundsSource, DatasetKind, LabeledDataset, MIN_MU,
};
use crate::error::{Error, Result};
use crate::lognnet::{
    compute_sh_matrix, evaluate_metric, normalize_sh_matrix, MetricKind, ShMatrix, ShStats,
    ShStatsScope, TrainOptions, Trainer, DEFAULT_LEARNING_RATE, DEFAULT_SEED,
};
use crate::reservoir::{fill_reservoir, FillMethod, ReservoirShape};

/// Epoch counts addressable through `Nset`.
pub const NSET_EPOCHS: [usize; 4] = [1, 5, 20, 100];
pub const NSET_COUNT: u32 = 72;

/// Encodes `(metric index, method number, epoch index)`, each 1-based.
pub fn nset_encode(m1: u32, m2: u32, m3: u32) -> Result<u32> {
    if !(1..=3).contains(&m1) || !(1..=6).contains(&m2) || !(1..=4).contains(&m3) {
        return Err(Error::domain(format!(
            "setting indices ({m1}, {m2}, {m3}) outside (1..=3, 1..=6, 1..=4)"
        )));
    }
    Ok((m1 - 1) * 24 + (m2 - 1) * 4 + m3)
}

pub fn nset_decode(n: u32) -> Result<(u32, u32, u32)> {
    if !(1..=NSET_COUNT).contains(&n) {
        return Err(Error::domain(format!("Nset {n} outside 1..=72")));
    }
    let k = n - 1;
    Ok((k / 24 + 1, (k % 24) / 4 + 1, k % 4 + 1))
}

fn metric_index(metric: MetricKind) -> u32 {
    match metric {
        MetricKind::R2E => 1,
        MetricKind::PE => 2,
        MetricKind::Acc => 3,
    }
}

/// One complete entropy configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NNetEnSettings {
    pub dataset: DatasetKind,
    pub mu: f64,
    pub method: FillMethod,
    pub epochs: usize,
    pub metric: MetricKind,
    pub seed: u64,
}

impl Default for NNetEnSettings {
    fn default() -> Self {
        NNetEnSettings {
            dataset: DatasetKind::D1,
            mu: 1.0,
            method: FillMethod::M3,
            epochs: 20,
            metric: MetricKind::Acc,
            seed: DEFAULT_SEED,
        }
    }
}

impl NNetEnSettings {
    /// Settings for `nset` on a given dataset and usage fraction.
    pub fn from_nset(dataset: DatasetKind, mu: f64, nset: u32, seed: u64) -> Result<Self> {
        let (m1, m2, m3) = nset_decode(nset)?;
        Ok(NNetEnSettings {
            dataset,
            mu,
            method: FillMethod::ALL[(m2 - 1) as usize],
            epochs: NSET_EPOCHS[(m3 - 1) as usize],
            metric: MetricKind::ALL[(m1 - 1) as usize],
            seed,
        })
    }

    /// `None` when the epoch count is not one of 1, 5, 20, 100.
    pub fn nset(&self) -> Option<u32> {
        let m3 = NSET_EPOCHS.iter().position(|&e| e == self.epochs)? as u32 + 1;
        nset_encode(metric_index(self.metric), u32::from(self.method.number()), m3).ok()
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_MU..=1.0).contains(&self.mu) {
            return Err(Error::domain(format!("mu = {} outside [0.01, 1]", self.mu)));
        }
        if self.epochs == 0 {
            return Err(Error::domain("epoch count must be at least 1"));
        }
        Ok(())
    }
}

/// `NNetEn(D1,1,M1,Ep5,R2E)`
impl fmt::Display for NNetEnSettings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "NNetEn({},{},{},Ep{},{})",
            self.dataset, self.mu, self.method, self.epochs, self.metric
        )
    }
}

impl FromStr for NNetEnSettings {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse settings '{s}'"));
        let inner = s
            .trim()
            .strip_prefix("NNetEn(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let [dataset, mu, method, ep, metric] = parts[..] else {
            return Err(bad());
        };
        let settings = NNetEnSettings {
            dataset: dataset.parse()?,
            mu: mu.parse().map_err(|_| bad())?,
            method: method.parse()?,
            epochs: ep
                .strip_prefix("Ep")
                .and_then(|e| e.parse().ok())
                .ok_or_else(bad)?,
            metric: metric.parse()?,
            seed: DEFAULT_SEED,
        };
        settings.validate()?;
        Ok(settings)
    }
}

/// Result of one evaluation with the provenance the log file records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub value: f64,
    pub settings: NNetEnSettings,
    pub series_length: usize,
    pub reservoir_dims: (usize, usize),
    pub wall_time: f64,
    pub timestamp: DateTime<Utc>,
}

/// Where the engine gets its full-size datasets from.
#[derive(Debug, Clone)]
pub enum DataSource {
    /// Standard file names under a directory: the four MNIST IDX files and
    /// `rbv1.csv`.
    Directory(PathBuf),
    /// Explicit MNIST paths (train images, train labels, test images, test
    /// labels) and RBV1 path.
    Files {
        mnist: Option<[PathBuf; 4]>,
        rbv1: Option<PathBuf>,
    },
    /// Datasets already in memory.
    InMemory {
        d1: Option<Arc<LabeledDataset>>,
        d2: Option<Arc<LabeledDataset>>,
    },
    /// Generated stand-ins (see [`synthetic`]).
    Synthetic { seed: u64 },
}

impl DataSource {
    fn mnist_paths(&self) -> Option<[PathBuf; 4]> {
        match self {
            DataSource::Directory(dir) => Some([
                dir.join(synthetic::TRAIN_IMAGES),
                dir.join(synthetic::TRAIN_LABELS),
                dir.join(synthetic::TEST_IMAGES),
                dir.join(synthetic::TEST_LABELS),
            ]),
            DataSource::Files { mnist, .. } => mnist.clone(),
            _ => None,
        }
    }

    fn rbv1_path(&self) -> Option<PathBuf> {
        match self {
            DataSource::Directory(dir) => Some(dir.join(synthetic::RBV1_FILE)),
            DataSource::Files { rbv1, .. } => rbv1.clone(),
            _ => None,
        }
    }

    fn load(&self, kind: DatasetKind) -> Result<LabeledDataset> {
        match (self, kind) {
            (DataSource::InMemory { d1, .. }, DatasetKind::D1) => d1
                .as_deref()
                .cloned()
                .ok_or_else(|| Error::Config("no D1 dataset supplied".into())),
            (DataSource::InMemory { d2, .. }, DatasetKind::D2) => d2
                .as_deref()
                .cloned()
                .ok_or_else(|| Error::Config("no D2 dataset supplied".into())),
            (DataSource::Synthetic { seed }, DatasetKind::D1) => Ok(synthetic::mnist_standin(*seed)),
            (DataSource::Synthetic { seed }, DatasetKind::D2) => Ok(synthetic::rbv1_standin(*seed)),
            (_, DatasetKind::D1) => {
                let [a, b, c, d] = self
                    .mnist_paths()
                    .ok_or_else(|| Error::Config("no MNIST files configured".into()))?;
                load_mnist(&a, &b, &c, &d)
            }
            (_, DatasetKind::D2) => {
                let p = self
                    .rbv1_path()
                    .ok_or_else(|| Error::Config("no RBV1 file configured".into()))?;
                load_rbv1(&p)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub learning_rate: f64,
    pub stats_scope: ShStatsScope,
    pub bounds: BoundsSource,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            learning_rate: DEFAULT_LEARNING_RATE,
            stats_scope: ShStatsScope::Training,
            bounds: BoundsSource::FullDatabase,
        }
    }
}

/// Identity metric-to-entropy map.
fn metric_to_entropy(metric: f64) -> f64 {
    metric
}

type CacheKey = (DatasetKind, u64);

/// Loads datasets lazily, caches each `(dataset, mu)` subset, and evaluates
/// entropies. Shared by reference across threads.
pub struct Engine {
    source: DataSource,
    config: EngineConfig,
    full: Mutex<HashMap<DatasetKind, Arc<LabeledDataset>>>,
    subsets: Mutex<HashMap<CacheKey, Arc<LabeledDataset>>>,
}

/// One cell of a settings grid evaluated by [`Engine::evaluate_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridValue {
    pub method: FillMethod,
    pub epochs: usize,
    pub metric: MetricKind,
    pub value: f64,
}

impl Engine {
    pub fn new(source: DataSource) -> Self {
        Self::with_config(source, EngineConfig::default())
    }

    pub fn with_config(source: DataSource, config: EngineConfig) -> Self {
        Engine {
            source,
            config,
            full: Mutex::new(HashMap::new()),
            subsets: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// The usage-fraction subset of `kind`, loaded and cached on first use.
    pub fn dataset(&self, kind: DatasetKind, mu: f64) -> Result<Arc<LabeledDataset>> {
        let key = (kind, mu.to_bits());
        if let Some(d) = self.subsets.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(d));
        }
        let full = {
            let mut full = self.full.lock().expect("cache lock");
            match full.get(&kind) {
                Some(d) => Arc::clone(d),
                None => {
                    let d = Arc::new(self.source.load(kind)?);
                    full.insert(kind, Arc::clone(&d));
                    d
                }
            }
        };
        let subset = if mu == 1.0 {
            full
        } else {
            Arc::new(full.subsample_with(mu, self.config.bounds)?)
        };
        self.subsets
            .lock()
            .expect("cache lock")
            .insert(key, Arc::clone(&subset));
        Ok(subset)
    }

    /// Evaluates one entropy value, timing the whole pipeline.
    pub fn compute_nneten(&self, series: &[f64], settings: &NNetEnSettings) -> Result<EntropyResult> {
        settings.validate()?;
        let start = Instant::now();
        let dataset = self.dataset(settings.dataset, settings.mu)?;
        let grid = self.evaluate_grid_on(
            &dataset,
            series,
            &[settings.method],
            &[settings.epochs],
            &[settings.metric],
            settings.seed,
        )?;
        let shape = ReservoirShape::for_dataset(settings.dataset);
        Ok(EntropyResult {
            value: grid[0].value,
            settings: *settings,
            series_length: series.len(),
            reservoir_dims: (shape.rows, shape.cols),
            wall_time: start.elapsed().as_secs_f64(),
            timestamp: Utc::now(),
        })
    }

    /// Entropy values for every `(method, epochs, metric)` combination.
    ///
    /// The reservoir projection is computed once per method and training
    /// runs once up to the largest epoch count; metrics are read off at each
    /// requested epoch. Values equal those of separate [`Self::compute_nneten`]
    /// calls. Output order: method, then epochs, then metric, each in the
    /// order given.
    pub fn evaluate_grid(
        &self,
        series: &[f64],
        dataset: DatasetKind,
        mu: f64,
        methods: &[FillMethod],
        epochs: &[usize],
        metrics: &[MetricKind],
        seed: u64,
    ) -> Result<Vec<GridValue>> {
        let data = self.dataset(dataset, mu)?;
        self.evaluate_grid_on(&data, series, methods, epochs, metrics, seed)
    }

    /// Entropy for each of the given `Nset` values.
    pub fn evaluate_nsets(
        &self,
        series: &[f64],
        dataset: DatasetKind,
        mu: f64,
        nsets: &[u32],
        seed: u64,
    ) -> Result<Vec<f64>> {
        let grid = self.evaluate_grid(
            series,
            dataset,
            mu,
            &FillMethod::ALL,
            &NSET_EPOCHS,
            &MetricKind::ALL,
            seed,
        )?;
        let lookup: HashMap<u32, f64> = grid
            .iter()
            .map(|g| {
                let s = NNetEnSettings {
                    dataset,
                    mu,
                    method: g.method,
                    epochs: g.epochs,
                    metric: g.metric,
                    seed,
                };
                (s.nset().expect("grid uses Nset epochs"), g.value)
            })
            .collect();
        nsets
            .iter()
            .map(|n| {
                nset_decode(*n)?;
                Ok(lookup[n])
            })
            .collect()
    }

    fn evaluate_grid_on(
        &self,
        dataset: &LabeledDataset,
        series: &[f64],
        methods: &[FillMethod],
        epochs: &[usize],
        metrics: &[MetricKind],
        seed: u64,
    ) -> Result<Vec<GridValue>> {
        if epochs.contains(&0) {
            return Err(Error::domain("epoch count must be at least 1"));
        }
        let max_epochs = epochs.iter().copied().max().unwrap_or(0);
        let options = TrainOptions {
            learning_rate: self.config.learning_rate,
            seed,
        };
        let mut out = Vec::with_capacity(methods.len() * epochs.len() * metrics.len());
        for &method in methods {
            let reservoir = fill_reservoir(series, method, dataset.kind())?;
            let train_raw = compute_sh_matrix(&reservoir, dataset, dataset.train())?;
            let coincident = dataset.train() == dataset.test();
            let test_raw = if coincident {
                None
            } else {
                Some(compute_sh_matrix(&reservoir, dataset, dataset.test())?)
            };
            let stats = match (self.config.stats_scope, &test_raw) {
                (ShStatsScope::All, Some(t)) => ShStats::from_matrices(&[&train_raw, t])?,
                _ => ShStats::from_matrices(&[&train_raw])?,
            };
            let train_h = normalize_sh_matrix(train_raw, &stats);
            let test_h: Option<ShMatrix> = test_raw.map(|t| normalize_sh_matrix(t, &stats));
            let test_ref = test_h.as_ref().unwrap_or(&train_h);

            let mut trainer = Trainer::new(
                &train_h,
                dataset.train().labels(),
                dataset.class_count(),
                options,
            )?;
            let mut snapshots = HashMap::new();
            for epoch in 1..=max_epochs {
                trainer.run_epoch()?;
                if epochs.contains(&epoch) {
                    let mut values = Vec::with_capacity(metrics.len());
                    for &m in metrics {
                        let v = evaluate_metric(m, trainer.weights(), test_ref, dataset.test().labels())?;
                        values.push(metric_to_entropy(v.value));
                    }
                    snapshots.insert(epoch, values);
                }
            }
            for &ep in epochs {
                for (mi, &metric) in metrics.iter().enumerate() {
                    out.push(GridValue {
                        method,
                        epochs: ep,
                        metric,
                        value: snapshots[&ep][mi],
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Append-only tab-separated log: timestamp, value, epochs, `RxC`, mu,
/// series length.
pub struct LogWriter {
    path: PathBuf,
    file: Mutex<File>,
}

impl LogWriter {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        Ok(LogWriter {
            path,
            file: Mutex::new(file),
        })
    }

    pub fn append(&self, result: &EntropyResult) -> Result<()> {
        let line = format_log_line(result);
        let mut f = self.file.lock().expect("log lock");
        f.write_all(line.as_bytes())
            .and_then(|_| f.flush())
            .map_err(|e| Error::io(&self.path, e))
    }
}

/// Appends one line for `result` to the log at `path`.
pub fn write_log(result: &EntropyResult, path: &Path) -> Result<()> {
    LogWriter::open(path)?.append(result)
}

pub fn format_log_line(result: &EntropyResult) -> String {
    format!(
        "{}\t{:?}\t{}\t{}x{}\t{}\t{}\n",
        result.timestamp.to_rfc3339_opts(SecondsFormat::Micros, true),
        result.value,
        result.settings.epochs,
        result.reservoir_dims.0,
        result.reservoir_dims.1,
        result.settings.mu,
        result.series_length
    )
}

/// Fields of one log line.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRecord {
    pub timestamp: DateTime<Utc>,
    pub value: f64,
    pub epochs: usize,
    pub reservoir_dims: (usize, usize),
    pub mu: f64,
    pub series_length: usize,
}

pub fn parse_log_line(line: &str) -> Result<LogRecord> {
    let bad = |what: &str| Error::Format(format!("log line: bad {what} in '{line}'"));
    let fields: Vec<&str> = line.trim_end_matches('\n').split('\t').collect();
    let [ts, value, epochs, dims, mu, len] = fields[..] else {
        return Err(bad("field count"));
    };
    let (r, c) = dims.split_once('x').ok_or_else(|| bad("dims"))?;
    Ok(LogRecord {
        timestamp: DateTime::parse_from_rfc3339(ts)
            .map_err(|_| bad("timestamp"))?
            .with_timezone(&Utc),
        value: value.parse().map_err(|_| bad("value"))?,
        epochs: epochs.parse().map_err(|_| bad("epochs"))?,
        reservoir_dims: (
            r.parse().map_err(|_| bad("dims"))?,
            c.parse().map_err(|_| bad("dims"))?,
        ),
        mu: mu.parse().map_err(|_| bad("mu"))?,
        series_length: len.parse().map_err(|_| bad("length"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::{sine_map_series, SineMapConfig};
    use crate::dataset::synthetic::{mnist_standin_sized, rbv1_standin_sized};

    fn small_engine() -> Engine {
        Engine::new(DataSource::InMemory {
            d1: Some(Arc::new(mnist_standin_sized(&[20; 10], &[5; 10], 1))),
            d2: Some(Arc::new(rbv1_standin_sized(100, 1))),
        })
    }

    fn series() -> Vec<f64> {
        sine_map_series(&SineMapConfig {
            series_count: 1,
            ..SineMapConfig::new(1.7551)
        })
        .unwrap()
        .remove(0)
    }

    #[test]
    fn codec_examples() {
        assert_eq!(nset_encode(1, 1, 1).unwrap(), 1);
        assert_eq!(nset_encode(2, 3, 2).unwrap(), 34);
        assert_eq!(nset_decode(60).unwrap(), (3, 3, 4));
        assert!(nset_encode(0, 1, 1).is_err());
        assert!(nset_encode(1, 7, 1).is_err());
        assert!(nset_decode(0).is_err());
        assert!(nset_decode(73).is_err());
        let s = NNetEnSettings::from_nset(DatasetKind::D2, 1.0, 34, 42).unwrap();
        assert_eq!((s.metric, s.method, s.epochs), (MetricKind::PE, FillMethod::M3, 5));
    }

    #[test]
    fn codec_round_trip_and_grid_completeness() {
        let mut seen = std::collections::HashSet::new();
        for n in 1..=72 {
            let (a, b, c) = nset_decode(n).unwrap();
            assert_eq!(nset_encode(a, b, c).unwrap(), n);
            let s = NNetEnSettings::from_nset(DatasetKind::D1, 1.0, n, 0).unwrap();
            assert_eq!(s.nset(), Some(n));
            assert!(seen.insert((s.metric, s.method, s.epochs)));
        }
        assert_eq!(seen.len(), 72);
        let odd = NNetEnSettings {
            epochs: 7,
            ..NNetEnSettings::default()
        };
        assert_eq!(odd.nset(), None);
    }

    #[test]
    fn settings_string() {
        let s: NNetEnSettings = "NNetEn(D1,1,M1,Ep5,R2E)".parse().unwrap();
        assert_eq!(s.dataset, DatasetKind::D1);
        assert_eq!(s.mu, 1.0);
        assert_eq!(s.method, FillMethod::M1);
        assert_eq!(s.epochs, 5);
        assert_eq!(s.metric, MetricKind::R2E);
        assert_eq!(s.to_string(), "NNetEn(D1,1,M1,Ep5,R2E)");
        assert!("NNetEn(D3,1,M1,Ep5,R2E)".parse::<NNetEnSettings>().is_err());
        assert!("NNetEn(D1,0,M1,Ep5,R2E)".parse::<NNetEnSettings>().is_err());
    }

    #[test]
    fn grid_matches_single_evaluations() {
        let engine = small_engine();
        let x = series();
        let grid = engine
            .evaluate_grid(
                &x,
                DatasetKind::D2,
                1.0,
                &[FillMethod::M2, FillMethod::M6],
                &[1, 5, 20],
                &MetricKind::ALL,
                42,
            )
            .unwrap();
        assert_eq!(grid.len(), 18);
        for g in &grid {
            let s = NNetEnSettings {
                dataset: DatasetKind::D2,
                mu: 1.0,
                method: g.method,
                epochs: g.epochs,
                metric: g.metric,
                seed: 42,
            };
            let single = engine.compute_nneten(&x, &s).unwrap();
            assert_eq!(single.value.to_bits(), g.value.to_bits(), "{s}");
        }
    }

    #[test]
    fn values_respect_metric_ranges_and_repeat() {
        let engine = small_engine();
        let x = series();
        for kind in [DatasetKind::D1, DatasetKind::D2] {
            for metric in MetricKind::ALL {
                let s = NNetEnSettings {
                    dataset: kind,
                    mu: 1.0,
                    method: FillMethod::M1,
                    epochs: 5,
                    metric,
                    seed: 3,
                };
                let a = engine.compute_nneten(&x, &s).unwrap();
                let b = engine.compute_nneten(&x, &s).unwrap();
                assert_eq!(a.value.to_bits(), b.value.to_bits());
                match metric {
                    MetricKind::Acc => assert!((0.0..=1.0).contains(&a.value)),
                    MetricKind::PE => assert!((-1.0..=1.0).contains(&a.value)),
                    MetricKind::R2E => assert!(a.value <= 1.0),
                }
            }
        }
    }

    #[test]
    fn missing_dataset_is_config_error() {
        let engine = Engine::new(DataSource::InMemory { d1: None, d2: None });
        let err = engine
            .compute_nneten(&[0.1, 0.2], &NNetEnSettings::default())
            .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn too_long_series_propagates() {
        let engine = small_engine();
        let s = NNetEnSettings {
            dataset: DatasetKind::D2,
            ..NNetEnSettings::default()
        };
        let err = engine.compute_nneten(&vec![0.3; 1301], &s).unwrap_err();
        assert!(matches!(err, Error::SeriesTooLong { .. }));
    }

    #[test]
    fn log_lines_append_and_parse_back() {
        let engine = small_engine();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.txt");
        let s = NNetEnSettings {
            dataset: DatasetKind::D2,
            mu: 0.5,
            metric: MetricKind::R2E,
            ..NNetEnSettings::default()
        };
        let r1 = engine.compute_nneten(&series(), &s).unwrap();
        let r2 = engine.compute_nneten(&series()[..100], &s).unwrap();
        write_log(&r1, &path).unwrap();
        write_log(&r2, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines.iter().all(|l| l.split('\t').count() == 6));
        let back = parse_log_line(lines[0]).unwrap();
        assert_eq!(back.value.to_bits(), r1.value.to_bits());
        assert_eq!(back.reservoir_dims, (25, 52));
        assert_eq!(back.mu, 0.5);
        assert_eq!(back.epochs, 20);
        assert_eq!(parse_log_line(lines[1]).unwrap().series_length, 100);
    }

    #[test]
    fn unwritable_log_reports_path() {
        let err = LogWriter::open("/nonexistent-dir/log.txt").err().unwrap();
        assert!(err.to_string().contains("/nonexistent-dir/log.txt"));
    }
}
