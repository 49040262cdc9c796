use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nneten(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nneten"))
        .args(args)
        .current_dir(cwd)
        .env_remove("NNETEN_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn generate(dir: &Path, r: &str, count: &str) -> String {
    ok(&nneten(&["generate", "--r", r, "--count", count, "--out-dir", "."], dir));
    format!("sine_r{r}.csv")
}

#[test]
fn generate_writes_class_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&nneten(&["generate", "--r", "1.1918", "--r", "1.2243", "--out-dir", "pair"], dir.path()));
    assert_eq!(out.lines().count(), 2);
    for r in ["1.1918", "1.2243"] {
        let text = fs::read_to_string(dir.path().join(format!("pair/sine_r{r}.csv"))).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 100);
        assert!(rows.iter().all(|l| l.split(',').count() == 300));
    }
    ok(&nneten(&["generate", "--r", "1.5", "--length", "1", "--count", "1"], dir.path()));
    let single = fs::read_to_string(dir.path().join("sine_r1.5.csv")).unwrap();
    assert_eq!(single.lines().count(), 1);
    assert!(!single.contains(','));
    let bad = nneten(&["generate", "--r", "2.5"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn compute_with_nset_and_log() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate(dir.path(), "1.7551", "3");
    let out = ok(&nneten(
        &["compute", &file, "--dataset", "d2", "--mu", "0.1", "--nset", "34", "--synthetic", "7"],
        dir.path(),
    ));
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# NNetEn(D2,0.1,M3,Ep5,PE) seed=42"), "{}", lines[0]);
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|v| v.parse::<f64>().unwrap() <= 1.0));
    let log = fs::read_to_string(dir.path().join("log.txt")).unwrap();
    assert_eq!(log.lines().count(), 3);
    assert!(log.lines().all(|l| l.contains("25x52")));

    let again = ok(&nneten(
        &[
            "compute", &file, "--dataset", "d2", "--mu", "0.1", "--method", "m3", "--epochs", "5", "--metric",
            "pe", "--synthetic", "7", "--no-log",
        ],
        dir.path(),
    ));
    assert_eq!(again, out);
    assert_eq!(fs::read_to_string(dir.path().join("log.txt")).unwrap(), log);
}

#[test]
fn usage_and_io_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate(dir.path(), "1.2", "1");
    let missing = nneten(&["compute", &file, "--dataset", "d2", "--data-dir", "nowhere", "--no-log"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    let err = String::from_utf8_lossy(&missing.stderr);
    assert!(err.contains("nowhere/rbv1.csv"), "{err}");

    let no_data = nneten(&["compute", &file, "--no-log"], dir.path());
    assert_eq!(no_data.status.code(), Some(2));
    assert_eq!(nneten(&["compute", &file, "--bogus"], dir.path()).status.code(), Some(2));
    let conflict = nneten(&["compute", &file, "--nset", "3", "--method", "2", "--synthetic", "1"], dir.path());
    assert_eq!(conflict.status.code(), Some(2));
    let bad_mu = nneten(&["compute", &file, "--mu", "2", "--synthetic", "1", "--no-log"], dir.path());
    assert_eq!(bad_mu.status.code(), Some(2));
    let no_input = nneten(&["compute", "absent.csv", "--synthetic", "1", "--no-log"], dir.path());
    assert_eq!(no_input.status.code(), Some(2));
}

#[test]
fn help_lists_flags() {
    let dir = tempfile::tempdir().unwrap();
    let help = ok(&nneten(&["compute", "--help"], dir.path()));
    for flag in ["--dataset", "--mu", "--method", "--epochs", "--metric", "--nset", "--seed", "--log", "--threads", "--data-dir"] {
        assert!(help.contains(flag), "missing {flag}");
    }
    assert!(help.contains("NNETEN_DATA_DIR"));
}

#[test]
fn separate_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "1.1918", "4");
    let b = generate(dir.path(), "1.2243", "4");
    let run = |threads: &str, out: &str| {
        ok(&nneten(
            &[
                "separate", "--threads", threads, "--class", &a, "--class", &b, "--dataset", "d2", "--mu", "0.05",
                "--synthetic", "3", "--out", out,
            ],
            dir.path(),
        ))
    };
    let summary = run("1", "one.csv");
    assert!(summary.starts_with("best Nset "));
    run("4", "four.csv");
    let one = fs::read(dir.path().join("one.csv")).unwrap();
    assert_eq!(one, fs::read(dir.path().join("four.csv")).unwrap());
    let text = String::from_utf8(one).unwrap();
    assert!(text.starts_with("# nneten separate dataset=D2 mu=0.05 seed=42"));
    assert_eq!(text.lines().count(), 2 + 72);
}

#[test]
fn combo_reports_grid_and_synergy() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "1.7161", "8");
    let b = generate(dir.path(), "1.7551", "8");
    let out = ok(&nneten(
        &[
            "combo", "--class", &a, "--class", &b, "--dataset", "d2", "--mu", "0.05", "--synthetic", "3", "--nset",
            "7", "--grid-out", "grid.csv", "--features-out", "features.csv",
        ],
        dir.path(),
    ));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["nneten_nset"], 7);
    assert_eq!(v["single"].as_array().unwrap().len(), 3);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);
    assert!(v["pairs"][0]["k_syn"].as_f64().is_some());
    let grid = fs::read_to_string(dir.path().join("grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 2 + 72);
    let features = fs::read_to_string(dir.path().join("features.csv")).unwrap();
    assert!(features.starts_with("label,NNetEn_7,SampEn,SVDEn\n"));
    assert_eq!(features.lines().count(), 17);
}

#[test]
fn eeg_pipeline_tables_every_component() {
    let dir = tempfile::tempdir().unwrap();
    for (label, freq) in [(0, 6.0), (1, 22.0)] {
        let mut text = String::from("Fz,Cz\n");
        for i in 0..3000 {
            let t = i as f64 / 500.0;
            let x = (2.0 * std::f64::consts::PI * freq * t).sin();
            let noise = ((i * 7919 + label * 31) % 101) as f64 / 101.0 - 0.5;
            text.push_str(&format!("{},{}\n", x + 0.2 * noise, 0.5 * x - 0.1 * noise));
        }
        fs::write(dir.path().join(format!("rec{label}.csv")), text).unwrap();
    }
    let out = ok(&nneten(
        &[
            "eeg", "--input", "0:rec0.csv", "--input", "1:rec1.csv", "--segment", "500", "--measure", "svden",
            "--features-out", "eeg_features.csv",
        ],
        dir.path(),
    ));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "column,f,f_kind,p_value");
    assert_eq!(rows.len(), 1 + 2 * 14);
    assert!(rows[1].starts_with("Fz:RAW,"));
    let features = fs::read_to_string(dir.path().join("eeg_features.csv")).unwrap();
    assert_eq!(features.lines().count(), 1 + 12);

    let nn = ok(&nneten(
        &[
            "eeg", "--input", "0:rec0.csv", "--input", "1:rec1.csv", "--segment", "500", "--components", "A3,D4",
            "--dataset", "d2", "--mu", "0.05", "--epochs", "3", "--synthetic", "1",
        ],
        dir.path(),
    ));
    assert_eq!(nn.lines().count(), 1 + 4);
    let bad = nneten(&["eeg", "--input", "rec0.csv", "--measure", "svden"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn bench_writes_one_row_per_case() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&nneten(
        &["bench", "--datasets", "d2", "--mu", "1,0.1", "--repeats", "1", "--synthetic", "2"],
        dir.path(),
    ));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("D2,1,5296,"));
    assert!(rows[2].starts_with("D2,0.1,530,"));
}

#[test]
fn fixtures_are_readable_from_data_dir() {
    let dir = tempfile::tempdir().unwrap();
    ok(&nneten(&["fixtures", "--out-dir", "data", "--seed", "5", "--no-d1"], dir.path()));
    let file = generate(dir.path(), "1.3", "2");
    let args = |src: &[&str]| {
        let mut v = vec!["compute", file.as_str(), "--dataset", "d2", "--mu", "0.2", "--epochs", "3", "--no-log"];
        v.extend_from_slice(src);
        ok(&nneten(&v, dir.path()))
    };
    let from_files = args(&["--data-dir", "data"]);
    let generated = args(&["--synthetic", "5"]);
    let values = |s: &str| s.lines().skip(1).map(str::to_string).collect::<Vec<_>>();
    assert_eq!(values(&from_files), values(&generated));

    let with_env = Command::new(env!("CARGO_BIN_EXE_nneten"))
        .args(["compute", &file, "--dataset", "d2", "--mu", "0.2", "--epochs", "3", "--no-log"])
        .env("NNETEN_DATA_DIR", "data")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(values(&ok(&with_env)), values(&generated));
}
