use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use nneten::analysis::{
    all_nsets, difference_grid, eeg_features, entropy_sweep, grid_peak, nset_label, read_channels_csv,
    rkf_accuracy, synergy, write_grid_csv, write_sweep_csv, EegConfig, EntropyMeasure, EntropySweep,
    FeatureTable, RkfConfig, Recording,
};
use nneten::chaos::{sine_map_series, SineMapConfig};
use nneten::dataset::{synthetic, write_rbv1_csv, DatasetKind};
use nneten::engine::{nset_decode, LogWriter, NNetEnSettings};
use nneten::ref_entropy::{sample_entropy, svd_entropy, SampEnParams, SvdEnParams};
use nneten::sigprep::{Component, FilterMode, FilterSpec};
use nneten::{Error, Result};
use serde_json::json;

use crate::io::{format_series_csv, read_series_csv, write_file, write_with_header};
use crate::{BenchArgs, ComboArgs, ComputeArgs, EegArgs, FixturesArgs, GenerateArgs, Measure, SeparateArgs, SweepArgs};

fn usage(e: Error) -> Error {
    match e {
        Error::Domain(m) => Error::Config(m),
        other => other,
    }
}

pub fn compute(a: &ComputeArgs) -> Result<()> {
    let settings = a.settings.settings()?;
    let series = read_series_csv(&a.input)?;
    let engine = a.data.engine()?;
    let log = if a.no_log { None } else { Some(LogWriter::open(&a.log)?) };

    let mut out = format!("# {settings} seed={} input={}\n", settings.seed, a.input.display());
    for (i, s) in series.iter().enumerate() {
        let r = engine.compute_nneten(s, &settings).map_err(|e| match e {
            Error::SeriesTooLong { .. } | Error::EmptySeries => Error::Config(format!("series {}: {e}", i + 1)),
            other => other,
        })?;
        if let Some(log) = &log {
            log.append(&r)?;
        }
        writeln!(out, "{:?}", r.value).expect("string write");
    }
    match &a.out {
        Some(p) => write_file(p, out.as_bytes()),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

pub fn generate(a: &GenerateArgs) -> Result<()> {
    for &r in &a.r {
        let cfg = SineMapConfig {
            r,
            x_start: a.x0,
            burn_in: a.burn_in,
            series_length: a.length,
            series_count: a.count,
        };
        let series = sine_map_series(&cfg).map_err(usage)?;
        let path = a.out_dir.join(format!("sine_r{r}.csv"));
        write_file(&path, format_series_csv(&series).as_bytes())?;
        println!("{}", path.display());
    }
    Ok(())
}

fn load_classes(paths: &[impl AsRef<Path>]) -> Result<Vec<Vec<Vec<f64>>>> {
    if paths.len() < 2 {
        return Err(Error::Config("give at least two --class files".into()));
    }
    paths.iter().map(|p| read_series_csv(p.as_ref())).collect()
}

fn class_list(s: &SweepArgs) -> String {
    s.classes
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn validate_mu(mu: f64) -> Result<()> {
    NNetEnSettings {
        mu,
        ..NNetEnSettings::default()
    }
    .validate()
    .map_err(usage)
}

fn run_sweep(s: &SweepArgs, dataset: DatasetKind, mu: f64, nsets: &[u32]) -> Result<EntropySweep> {
    validate_mu(mu)?;
    for &n in nsets {
        nset_decode(n).map_err(usage)?;
    }
    let classes = load_classes(&s.classes)?;
    let engine = s.data.engine()?;
    entropy_sweep(&engine, &classes, dataset, mu, nsets, s.seed)
}

pub fn separate(a: &SeparateArgs) -> Result<()> {
    let nsets = if a.nsets.is_empty() { all_nsets() } else { a.nsets.clone() };
    let s = &a.sweep;
    let sweep = run_sweep(s, s.dataset, s.mu, &nsets)?;
    let mut body = Vec::new();
    write_sweep_csv(&sweep, &mut body)?;
    let header = format!(
        "nneten separate dataset={} mu={} seed={} data={} classes={}",
        s.dataset,
        s.mu,
        s.seed,
        s.data.describe(),
        class_list(s)
    );
    write_with_header(&a.out, &header, &body)?;
    if let Some(best) = sweep.best() {
        println!(
            "best Nset {} ({}): F {} [{}]",
            best.nset,
            nset_label(best.nset)?,
            best.f_ratio.f.score(),
            best.f_ratio.f.label()
        );
    }
    Ok(())
}

pub fn combo(a: &ComboArgs) -> Result<()> {
    let s = &a.sweep;
    let nsets = all_nsets();
    let sweep_a = run_sweep(s, s.dataset, s.mu, &nsets)?;
    let dataset_b = a.dataset_b.unwrap_or(s.dataset);
    let mu_b = a.mu_b.unwrap_or(s.mu);
    let sweep_b = if dataset_b == s.dataset && mu_b == s.mu {
        sweep_a.clone()
    } else {
        run_sweep(s, dataset_b, mu_b, &nsets)?
    };

    let axis = |sw: &EntropySweep| -> Vec<Vec<f64>> { (0..nsets.len()).map(|k| sw.feature(k).0).collect() };
    let labels = sweep_a.feature(0).1;
    let grid = difference_grid(&axis(&sweep_a), &axis(&sweep_b), &labels)?;
    let peak = grid_peak(&grid).expect("non-empty grid");
    if let Some(p) = &a.grid_out {
        let names: Vec<String> = nsets.iter().map(u32::to_string).collect();
        let mut body = Vec::new();
        write_grid_csv(&grid, &names, &names, &mut body)?;
        let header = format!(
            "nneten combo grid a={}:{} b={dataset_b}:{mu_b} seed={} data={} classes={}",
            s.dataset,
            s.mu,
            s.seed,
            s.data.describe(),
            class_list(s)
        );
        write_with_header(p, &header, &body)?;
    }

    let chosen = match a.nset {
        Some(n) => {
            nset_decode(n).map_err(usage)?;
            n
        }
        None => sweep_a.best().expect("72 rows").nset,
    };
    let k = nsets.iter().position(|&n| n == chosen).expect("all settings swept");
    let nneten = sweep_a.feature(k).0;
    let classes = load_classes(&s.classes)?;
    let sampen_p = SampEnParams {
        m: a.sampen_m,
        r_factor: a.sampen_r,
    };
    let svd_p = SvdEnParams {
        m: a.svd_m,
        ..SvdEnParams::default()
    };
    let mut sampen = Vec::new();
    let mut svden = Vec::new();
    for (c, class) in classes.iter().enumerate() {
        for (i, x) in class.iter().enumerate() {
            sampen.push(sample_entropy(x, sampen_p)?.ok_or_else(|| {
                Error::Domain(format!("SampEn undefined for class {c} series {}", i + 1))
            })?);
            svden.push(svd_entropy(x, svd_p)?);
        }
    }
    let nname = format!("NNetEn_{chosen}");
    let table = FeatureTable::from_columns(
        vec![(nname.clone(), nneten), ("SampEn".into(), sampen), ("SVDEn".into(), svden)],
        labels,
    )?;
    if let Some(p) = &a.features_out {
        let mut body = Vec::new();
        table.write_csv(&mut body)?;
        write_file(p, &body)?;
    }

    let cfg = RkfConfig {
        seed: a.rkf_seed,
        ..RkfConfig::default()
    };
    let names = [nname.as_str(), "SampEn", "SVDEn"];
    let mut single = Vec::new();
    for n in names {
        let r = rkf_accuracy(&table.select(&[n])?, &cfg)?;
        single.push(r);
    }
    let mut pairs = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let r = rkf_accuracy(&table.select(&[names[i], names[j]])?, &cfg)?;
            let k_syn = synergy(single[i].accuracy, single[j].accuracy, r.accuracy);
            pairs.push(json!({
                "features": [names[i], names[j]],
                "a_rkf": r.accuracy,
                "c": r.c,
                "gamma": r.gamma,
                "k_syn": k_syn,
            }));
        }
    }
    let summary = json!({
        "dataset_a": s.dataset.to_string(),
        "mu_a": s.mu,
        "dataset_b": dataset_b.to_string(),
        "mu_b": mu_b,
        "seed": s.seed,
        "rkf_seed": a.rkf_seed,
        "classes": s.classes.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "grid_peak": {
            "nset_a": nsets[peak.0],
            "nset_b": nsets[peak.1],
            "f": peak.2.score(),
            "kind": peak.2.label(),
        },
        "nneten_nset": chosen,
        "single": names.iter().zip(&single).map(|(n, r)| json!({
            "feature": n,
            "a_rkf": r.accuracy,
            "c": r.c,
            "gamma": r.gamma,
        })).collect::<Vec<_>>(),
        "pairs": pairs,
    });
    let text = serde_json::to_string_pretty(&summary).expect("JSON values are finite") + "\n";
    match &a.out {
        Some(p) => write_file(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_input(spec: &str) -> Result<(usize, &Path)> {
    let (label, path) = spec
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("--input '{spec}' is not LABEL:PATH")))?;
    let label = label
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("--input label '{label}' is not a class index")))?;
    Ok((label, Path::new(path)))
}

pub fn eeg(a: &EegArgs) -> Result<()> {
    let filter = FilterSpec {
        order: a.order,
        low_hz: a.low,
        high_hz: a.high,
        sample_rate_hz: a.fs,
    };
    filter.validate().map_err(usage)?;
    let components = if a.components.is_empty() {
        Component::all(a.levels.min(u8::MAX as usize) as u8)
    } else {
        a.components
            .iter()
            .map(|c| c.parse::<Component>().map_err(usage))
            .collect::<Result<_>>()?
    };
    let measure = match a.measure {
        Measure::Nneten => EntropyMeasure::NNetEn(a.settings.settings().map_err(usage)?),
        Measure::Sampen => EntropyMeasure::SampEn(SampEnParams::default()),
        Measure::Svden => EntropyMeasure::SvdEn(SvdEnParams::default()),
    };
    let mut recordings = Vec::new();
    for spec in &a.inputs {
        let (label, path) = parse_input(spec)?;
        let file = std::fs::File::open(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        recordings.push(Recording {
            label,
            channels: read_channels_csv(file)?,
        });
    }
    let engine = match a.measure {
        Measure::Nneten => a.data.engine()?,
        // reference entropies need no dataset
        _ => nneten::Engine::new(nneten::engine::DataSource::InMemory { d1: None, d2: None }),
    };
    let config = EegConfig {
        filter,
        filter_mode: if a.single_pass { FilterMode::SinglePass } else { FilterMode::ZeroPhase },
        levels: a.levels,
        segment_len: a.segment,
        components,
        measure,
    };
    let out = eeg_features(&engine, &recordings, &config)?;
    if let Some(p) = &a.features_out {
        let mut body = Vec::new();
        out.table.write_csv(&mut body)?;
        write_file(p, &body)?;
    }
    let mut text = String::from("column,f,f_kind,p_value\n");
    for c in &out.separation {
        writeln!(
            text,
            "{},{:?},{},{:?}",
            c.column,
            c.f_ratio.f.score(),
            c.f_ratio.f.label(),
            c.f_ratio.p_value
        )
        .expect("string write");
    }
    match &a.out {
        Some(p) => write_file(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn bench(a: &BenchArgs) -> Result<()> {
    let datasets = if a.datasets.is_empty() {
        vec![DatasetKind::D1, DatasetKind::D2]
    } else {
        a.datasets.clone()
    };
    let mus = if a.mu.is_empty() { vec![1.0, 0.1, 0.01] } else { a.mu.clone() };
    if a.repeats == 0 {
        return Err(Error::Config("--repeats must be at least 1".into()));
    }
    let engine = a.data.engine()?;
    let x = sine_map_series(&SineMapConfig {
        series_count: 1,
        series_length: a.length,
        ..SineMapConfig::new(1.1918)
    })
    .map_err(usage)?
    .remove(0);
    let mut text = String::from("dataset,mu,train_samples,median_s,min_s,max_s,value\n");
    for &dataset in &datasets {
        for &mu in &mus {
            let s = NNetEnSettings {
                dataset,
                mu,
                method: a.method,
                epochs: a.epochs,
                metric: a.metric,
                seed: a.seed,
            };
            s.validate().map_err(usage)?;
            // first call loads and caches the subset
            let value = engine.compute_nneten(&x, &s)?.value;
            let mut times: Vec<f64> = (0..a.repeats)
                .map(|_| {
                    let t = Instant::now();
                    engine.compute_nneten(&x, &s).map(|_| t.elapsed().as_secs_f64())
                })
                .collect::<Result<_>>()?;
            times.sort_by(f64::total_cmp);
            let samples = engine.dataset(dataset, mu)?.train().len();
            writeln!(
                text,
                "{dataset},{mu},{samples},{:.6},{:.6},{:.6},{value:?}",
                times[times.len() / 2],
                times[0],
                times[times.len() - 1]
            )
            .expect("string write");
        }
    }
    match &a.out {
        Some(p) => write_file(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn fixtures(a: &FixturesArgs) -> Result<()> {
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::Io {
        path: a.out_dir.clone(),
        source: e,
    })?;
    let rbv1 = a.out_dir.join(synthetic::RBV1_FILE);
    write_rbv1_csv(&rbv1, &synthetic::rbv1_standin(a.seed))?;
    println!("{}", rbv1.display());
    if !a.no_d1 {
        synthetic::write_mnist_files(&a.out_dir, &synthetic::mnist_standin(a.seed))?;
        for name in [
            synthetic::TRAIN_IMAGES,
            synthetic::TRAIN_LABELS,
            synthetic::TEST_IMAGES,
            synthetic::TEST_LABELS,
        ] {
            println!("{}", a.out_dir.join(name).display());
        }
    }
    Ok(())
}
