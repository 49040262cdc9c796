use nneten::analysis::*;
use nneten::chaos::{sine_map_series, SineMapConfig, PAIR_A, PAIR_B};
use nneten::dataset::DatasetKind;
use nneten::engine::{DataSource, Engine};

fn series(r: f64, n: usize) -> Vec<Vec<f64>> {
    sine_map_series(&SineMapConfig {
        series_count: n,
        ..SineMapConfig::new(r)
    })
    .unwrap()
}

#[test]
fn duplicated_class_has_no_separation() {
    let engine = Engine::new(DataSource::Synthetic { seed: 2 });
    let class = series(PAIR_A.0, 4);
    let sw = entropy_sweep(&engine, &[class.clone(), class], DatasetKind::D2, 0.05, &all_nsets(), 1).unwrap();
    assert_eq!(sw.rows.len(), 72);
    for row in &sw.rows {
        match row.f_ratio.f {
            FStatistic::Finite(f) => assert!(f.abs() < 1e-12, "Nset {}: {f}", row.nset),
            FStatistic::Undefined => {}
            FStatistic::Infinite => panic!("Nset {} infinite", row.nset),
        }
        assert_eq!(row.means[0], row.means[1]);
    }
}

#[test]
fn sweep_csv_and_difference_grid() {
    let engine = Engine::new(DataSource::Synthetic { seed: 2 });
    let classes = vec![series(PAIR_B.0, 5), series(PAIR_B.1, 5)];
    let nsets = [1, 34, 60];
    let sw = entropy_sweep(&engine, &classes, DatasetKind::D2, 0.1, &nsets, 1).unwrap();
    let mut buf = Vec::new();
    write_sweep_csv(&sw, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "nset,metric,method,epochs,mean_0,mean_1,std_0,std_1,f,f_kind,p_value");
    assert!(lines[2].starts_with("34,PE,M3,5,"));
    assert_eq!(lines.len(), 4);

    let axis: Vec<Vec<f64>> = (0..nsets.len()).map(|k| sw.feature(k).0).collect();
    let labels = sw.feature(0).1;
    let grid = difference_grid(&axis, &axis, &labels).unwrap();
    for i in 0..3 {
        assert_eq!(grid[i][i].f, FStatistic::Undefined);
        for j in 0..3 {
            let (a, b) = (grid[i][j].f.score(), grid[j][i].f.score());
            assert!(a == b || (a - b).abs() <= 1e-9 * a.abs());
        }
    }
    let mut out = Vec::new();
    let names: Vec<String> = nsets.iter().map(|n| n.to_string()).collect();
    write_grid_csv(&grid, &names, &names, &mut out).unwrap();
    assert!(String::from_utf8(out).unwrap().starts_with("a\\b,1,34,60\n1,nan,"));
}

#[test]
fn paired_features_and_synergy() {
    // two noisy views of the same latent split; together they separate better
    let n = 120;
    let labels: Vec<usize> = (0..n).map(|i| i % 2).collect();
    let noise = |i: usize, k: usize| (((i * 7919 + k * 104_729) % 1000) as f64 / 1000.0 - 0.5) * 2.4;
    let a: Vec<f64> = labels.iter().enumerate().map(|(i, &l)| l as f64 + noise(i, 1)).collect();
    let b: Vec<f64> = labels.iter().enumerate().map(|(i, &l)| l as f64 + noise(i, 2)).collect();
    let table = FeatureTable::from_columns(vec![("a".into(), a), ("b".into(), b)], labels).unwrap();
    let cfg = RkfConfig {
        n_repeats_search: 2,
        n_repeats_eval: 3,
        ..RkfConfig::default()
    };
    let a1 = rkf_accuracy(&table.select(&["a"]).unwrap(), &cfg).unwrap().accuracy;
    let a2 = rkf_accuracy(&table.select(&["b"]).unwrap(), &cfg).unwrap().accuracy;
    let a12 = rkf_accuracy(&table, &cfg).unwrap().accuracy;
    assert!(a12 > a1.max(a2), "{a1} {a2} {a12}");
    assert!(synergy(a1, a2, a12) > 1.0);
}
