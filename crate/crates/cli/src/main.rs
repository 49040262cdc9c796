mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nneten::dataset::DatasetKind;
use nneten::engine::{DataSource, Engine, NNetEnSettings};
use nneten::{Error, FillMethod, MetricKind, Result};

#[derive(Debug, Parser)]
#[command(name = "nneten", version, about = "Neural network entropy of time series and separation experiments")]
struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropy of every series (one per CSV line) in a file.
    Compute(ComputeArgs),
    /// Sine-map class files.
    Generate(GenerateArgs),
    /// Per-setting class means, deviations and F-ratios over all 72 settings.
    Separate(SeparateArgs),
    /// Entropy-difference F-ratio grid, paired-feature accuracy and synergy.
    Combo(ComboArgs),
    /// Filter, wavelet-decompose and tabulate entropies of channel recordings.
    Eeg(EegArgs),
    /// Wall time of single evaluations versus dataset and usage fraction.
    Bench(BenchArgs),
    /// Writes synthetic stand-in dataset files in the expected layout.
    Fixtures(FixturesArgs),
}

#[derive(Debug, Clone, Args)]
struct DataArgs {
    /// Directory holding the four MNIST IDX files and rbv1.csv.
    #[arg(long, env = "NNETEN_DATA_DIR", value_name = "DIR")]
    data_dir: Option<PathBuf>,
    /// Use generated stand-in datasets with this seed instead of files.
    #[arg(long, value_name = "SEED")]
    synthetic: Option<u64>,
}

impl DataArgs {
    fn engine(&self) -> Result<Engine> {
        let source = match (self.synthetic, &self.data_dir) {
            (Some(seed), _) => DataSource::Synthetic { seed },
            (None, Some(dir)) => DataSource::Directory(dir.clone()),
            (None, None) => {
                return Err(Error::Config(
                    "no dataset location: pass --data-dir, set NNETEN_DATA_DIR or use --synthetic SEED".into(),
                ))
            }
        };
        Ok(Engine::new(source))
    }

    fn describe(&self) -> String {
        match (self.synthetic, &self.data_dir) {
            (Some(seed), _) => format!("synthetic:{seed}"),
            (None, Some(dir)) => dir.display().to_string(),
            (None, None) => "none".into(),
        }
    }
}

#[derive(Debug, Clone, Args)]
struct SettingsArgs {
    /// Reference dataset: d1 (MNIST-10) or d2 (SARS-CoV-2-RBV1).
    #[arg(long, default_value = "d1")]
    dataset: DatasetKind,
    /// Fraction of the dataset used, in [0.01, 1].
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Reservoir filling method, 1-6 (or m1-m6).
    #[arg(long, default_value = "3", conflicts_with = "nset")]
    method: FillMethod,
    /// Training epochs.
    #[arg(long, default_value_t = 20, conflicts_with = "nset")]
    epochs: usize,
    /// Metric: acc, r2e or pe.
    #[arg(long, default_value = "acc", conflicts_with = "nset")]
    metric: MetricKind,
    /// Setting number 1-72 selecting metric, method and epochs together.
    #[arg(long)]
    nset: Option<u32>,
    /// Classifier initialization seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl SettingsArgs {
    fn settings(&self) -> Result<NNetEnSettings> {
        let s = match self.nset {
            Some(n) => NNetEnSettings::from_nset(self.dataset, self.mu, n, self.seed)
                .map_err(|e| Error::Config(e.to_string()))?,
            None => NNetEnSettings {
                dataset: self.dataset,
                mu: self.mu,
                method: self.method,
                epochs: self.epochs,
                metric: self.metric,
                seed: self.seed,
            },
        };
        s.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(s)
    }
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// Series file: one series per line, comma separated.
    input: PathBuf,
    #[command(flatten)]
    settings: SettingsArgs,
    #[command(flatten)]
    data: DataArgs,
    /// Log file appended with one line per value.
    #[arg(long, default_value = "log.txt", value_name = "PATH")]
    log: PathBuf,
    /// Do not write the log file.
    #[arg(long)]
    no_log: bool,
    /// Write the values here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Map parameter; repeat for several classes.
    #[arg(long = "r", required = true, value_name = "R")]
    r: Vec<f64>,
    /// Series per class.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Points per series.
    #[arg(long, default_value_t = 300)]
    length: usize,
    /// Discarded transient iterations (the starting value included).
    #[arg(long, default_value_t = 1000)]
    burn_in: usize,
    /// Starting value.
    #[arg(long, default_value_t = 0.1)]
    x0: f64,
    #[arg(long, default_value = ".", value_name = "DIR")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Class file (one series per line); give at least two.
    #[arg(long = "class", required = true, num_args = 1, value_name = "PATH")]
    classes: Vec<PathBuf>,
    #[arg(long, default_value = "d1")]
    dataset: DatasetKind,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    data: DataArgs,
}

#[derive(Debug, Args)]
struct SeparateArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Comma-separated Nset values (default: all 72).
    #[arg(long, value_delimiter = ',')]
    nsets: Vec<u32>,
    /// Output CSV.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ComboArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Second dataset for the difference grid (default: same as --dataset).
    #[arg(long)]
    dataset_b: Option<DatasetKind>,
    /// Usage fraction for the second dataset (default: --mu).
    #[arg(long)]
    mu_b: Option<f64>,
    /// Setting of the NNetEn feature paired with SampEn and SVDEn (default:
    /// the setting with the largest F-ratio).
    #[arg(long)]
    nset: Option<u32>,
    /// Embedding dimension for SampEn.
    #[arg(long, default_value_t = 2)]
    sampen_m: usize,
    /// SampEn tolerance as a multiple of the standard deviation.
    #[arg(long, default_value_t = 0.2)]
    sampen_r: f64,
    /// Embedding dimension for SVDEn.
    #[arg(long, default_value_t = 2)]
    svd_m: usize,
    /// Seed of the cross-validation fold assignment.
    #[arg(long, default_value_t = 42)]
    rkf_seed: u64,
    /// F-ratio grid CSV.
    #[arg(long, value_name = "PATH")]
    grid_out: Option<PathBuf>,
    /// Feature table CSV.
    #[arg(long, value_name = "PATH")]
    features_out: Option<PathBuf>,
    /// JSON summary (default: standard output).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Measure {
    Nneten,
    Sampen,
    Svden,
}

#[derive(Debug, Args)]
struct EegArgs {
    /// Recording as LABEL:PATH (CSV, one column per channel); repeat.
    #[arg(long = "input", required = true, value_name = "LABEL:PATH")]
    inputs: Vec<String>,
    /// Sample rate in Hz.
    #[arg(long, default_value_t = 500.0)]
    fs: f64,
    #[arg(long, default_value_t = 0.5)]
    low: f64,
    #[arg(long, default_value_t = 32.0)]
    high: f64,
    #[arg(long, default_value_t = 5)]
    order: usize,
    /// Single forward pass instead of zero-phase filtering.
    #[arg(long)]
    single_pass: bool,
    /// Wavelet decomposition levels.
    #[arg(long, default_value_t = 6)]
    levels: usize,
    /// Samples per analysed segment.
    #[arg(long, default_value_t = 1000)]
    segment: usize,
    /// Comma-separated components (RAW, FILTERED, A1.., D1..); default all.
    #[arg(long, value_delimiter = ',')]
    components: Vec<String>,
    #[arg(long, value_enum, default_value_t = Measure::Nneten)]
    measure: Measure,
    #[command(flatten)]
    settings: SettingsArgs,
    #[command(flatten)]
    data: DataArgs,
    /// Feature table CSV.
    #[arg(long, value_name = "PATH")]
    features_out: Option<PathBuf>,
    /// Per-column F-ratio CSV (default: standard output).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Datasets to time (default: both).
    #[arg(long, value_delimiter = ',')]
    datasets: Vec<DatasetKind>,
    /// Usage fractions (default: 1, 0.1, 0.01).
    #[arg(long, value_delimiter = ',')]
    mu: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value = "2")]
    method: FillMethod,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value = "acc")]
    metric: MetricKind,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Length of the timed sine-map series.
    #[arg(long, default_value_t = 300)]
    length: usize,
    #[command(flatten)]
    data: DataArgs,
    /// Output CSV (default: standard output).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FixturesArgs {
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Skip the MNIST-style files.
    #[arg(long)]
    no_d1: bool,
}

/// Usage and I/O problems exit with 2, computational failures with 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } | Error::Format(_) | Error::Parse { .. } | Error::Config(_) | Error::Consistency(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Compute(a) => commands::compute(a),
        Command::Generate(a) => commands::generate(a),
        Command::Separate(a) => commands::separate(a),
        Command::Combo(a) => commands::combo(a),
        Command::Eeg(a) => commands::eeg(a),
        Command::Bench(a) => commands::bench(a),
        Command::Fixtures(a) => commands::fixtures(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
