//! Deterministic stand-ins for the reference datasets.
//!
//! The clinical RBV1 file and the MNIST files are not always available (CI,
//! the browser demo). These generators produce data with the same shapes,
//! class counts and value ranges so the whole pipeline can run without them.
//! Entropy values computed against a stand-in are not comparable to values
//! computed against the real databases.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{
    DatasetKind, Features, LabeledDataset, Split, MNIST_TEST_COUNTS, MNIST_TRAIN_COUNTS,
    RBV1_CLASS_COUNT,
};
use crate::error::Result;

const LATENT: usize = 10;

/// Full-size RBV1 stand-in: 2648 rows per class, 51 features, file order
/// shuffled.
pub fn rbv1_standin(seed: u64) -> LabeledDataset {
    rbv1_standin_sized(RBV1_CLASS_COUNT, seed)
}

/// RBV1 stand-in with `per_class` rows of each label.
///
/// Each feature mixes a shared latent factor, a small class shift and
/// independent noise; about a third of the features are log-normal like
/// typical blood counts. No single feature separates the classes well.
pub fn rbv1_standin_sized(per_class: usize, seed: u64) -> LabeledDataset {
    let features = DatasetKind::D2.feature_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = |rng: &mut ChaCha8Rng| -> f64 { StandardNormal.sample(rng) };

    let loadings: Vec<[f64; LATENT]> = (0..features)
        .map(|_| std::array::from_fn(|_| 0.8 * normal(&mut rng)))
        .collect();
    let shifts: Vec<f64> = (0..features).map(|_| 0.3 * normal(&mut rng)).collect();
    let skewed: Vec<bool> = (0..features).map(|_| rng.random_bool(0.35)).collect();
    let offsets: Vec<f64> = (0..features).map(|_| rng.random_range(1.0..50.0)).collect();
    let scales: Vec<f64> = (0..features).map(|_| rng.random_range(0.5..10.0)).collect();

    let mut labels: Vec<u8> = (0..2 * per_class).map(|i| (i % 2) as u8).collect();
    labels.shuffle(&mut rng);

    let mut values = Vec::with_capacity(labels.len() * features);
    for &label in &labels {
        let z: [f64; LATENT] = std::array::from_fn(|_| normal(&mut rng));
        let sign = if label == 1 { 1.0 } else { -1.0 };
        for f in 0..features {
            let latent: f64 = loadings[f].iter().zip(&z).map(|(a, b)| a * b).sum();
            let u = latent + sign * shifts[f] + 0.6 * normal(&mut rng);
            let shaped = if skewed[f] { (0.5 * u).exp() } else { u };
            values.push(offsets[f] + scales[f] * shaped);
        }
    }
    let rows = Split::new(Features::Values(values), labels, features)
        .expect("generator emits consistent rows");
    LabeledDataset::coincident(DatasetKind::D2, rows).expect("generator emits valid labels")
}

/// Full-size MNIST stand-in with the published per-class train/test counts.
pub fn mnist_standin(seed: u64) -> LabeledDataset {
    mnist_standin_sized(&MNIST_TRAIN_COUNTS, &MNIST_TEST_COUNTS, seed)
}

/// MNIST stand-in: rendered stroke digits with random affine jitter, pen
/// width and pixel noise, 28x28 grey levels 0..=255.
pub fn mnist_standin_sized(
    train_counts: &[usize; 10],
    test_counts: &[usize; 10],
    seed: u64,
) -> LabeledDataset {
    let train = render_split(train_counts, seed);
    let test = render_split(test_counts, seed ^ 0x5EED_7E57);
    LabeledDataset::new(DatasetKind::D1, train, test).expect("generator emits valid splits")
}

fn render_split(counts: &[usize; 10], seed: u64) -> Split {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<u8> = counts
        .iter()
        .enumerate()
        .flat_map(|(d, &c)| std::iter::repeat_n(d as u8, c))
        .collect();
    labels.shuffle(&mut rng);
    let mut pixels = vec![0u8; labels.len() * 784];
    for (img, &digit) in pixels.chunks_exact_mut(784).zip(&labels) {
        render_digit(digit, &mut rng, img);
    }
    Split::new(Features::Pixels(pixels), labels, 784).expect("generator emits consistent rows")
}

type Stroke = Vec<(f64, f64)>;

fn arc(cx: f64, cy: f64, rx: f64, ry: f64, from: f64, to: f64, steps: usize) -> Stroke {
    (0..=steps)
        .map(|i| {
            let t = from + (to - from) * i as f64 / steps as f64;
            (cx + rx * t.cos(), cy + ry * t.sin())
        })
        .collect()
}

/// Glyph skeletons in a unit box, y pointing down.
fn glyph(digit: u8) -> Vec<Stroke> {
    match digit {
        0 => vec![arc(0.5, 0.5, 0.32, 0.48, 0.0, 2.0 * PI, 16)],
        1 => vec![vec![(0.32, 0.18), (0.55, 0.0), (0.55, 1.0)]],
        2 => vec![vec![
            (0.15, 0.25),
            (0.3, 0.05),
            (0.6, 0.0),
            (0.85, 0.2),
            (0.8, 0.45),
            (0.15, 1.0),
            (0.9, 1.0),
        ]],
        3 => vec![vec![
            (0.15, 0.1),
            (0.5, 0.0),
            (0.8, 0.15),
            (0.75, 0.4),
            (0.45, 0.5),
            (0.8, 0.6),
            (0.85, 0.85),
            (0.5, 1.0),
            (0.15, 0.9),
        ]],
        4 => vec![vec![(0.7, 1.0), (0.7, 0.0), (0.1, 0.7), (0.9, 0.7)]],
        5 => vec![vec![
            (0.85, 0.0),
            (0.25, 0.0),
            (0.2, 0.45),
            (0.6, 0.4),
            (0.85, 0.65),
            (0.7, 0.95),
            (0.2, 0.95),
        ]],
        6 => vec![vec![
            (0.75, 0.0),
            (0.35, 0.3),
            (0.2, 0.7),
            (0.4, 1.0),
            (0.75, 0.9),
            (0.75, 0.6),
            (0.4, 0.55),
            (0.22, 0.7),
        ]],
        7 => vec![vec![(0.1, 0.0), (0.9, 0.0), (0.4, 1.0)]],
        8 => vec![
            arc(0.5, 0.24, 0.22, 0.24, 0.0, 2.0 * PI, 12),
            arc(0.5, 0.74, 0.28, 0.26, 0.0, 2.0 * PI, 12),
        ],
        _ => vec![
            arc(0.48, 0.28, 0.26, 0.28, 0.0, 2.0 * PI, 12),
            vec![(0.74, 0.3), (0.62, 1.0)],
        ],
    }
}

fn render_digit(digit: u8, rng: &mut ChaCha8Rng, out: &mut [u8]) {
    let angle = 0.18 * rng.sample::<f64, _>(StandardNormal);
    let shear = 0.15 * rng.sample::<f64, _>(StandardNormal);
    let sx = rng.random_range(14.0..20.0);
    let sy = rng.random_range(17.0..21.0);
    let tx = 14.0 + rng.random_range(-1.5..1.5);
    let ty = 14.0 + rng.random_range(-1.5..1.5);
    let pen = rng.random_range(1.0..2.0);
    let (sin, cos) = angle.sin_cos();

    let segments: Vec<((f64, f64), (f64, f64))> = glyph(digit)
        .into_iter()
        .flat_map(|stroke| {
            let pts: Vec<(f64, f64)> = stroke
                .into_iter()
                .map(|(x, y)| {
                    let x = x - 0.5 + 0.03 * rng.sample::<f64, _>(StandardNormal);
                    let y = y - 0.5 + 0.03 * rng.sample::<f64, _>(StandardNormal);
                    let x = (x + shear * y) * sx;
                    let y = y * sy;
                    (tx + cos * x - sin * y, ty + sin * x + cos * y)
                })
                .collect();
            pts.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>()
        })
        .collect();

    for (idx, px) in out.iter_mut().enumerate() {
        let p = ((idx % 28) as f64 + 0.5, (idx / 28) as f64 + 0.5);
        let d = segments
            .iter()
            .map(|&(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min);
        let ink = (1.0 + pen - d).clamp(0.0, 1.0);
        let noise = if ink > 0.0 {
            0.08 * rng.sample::<f64, _>(StandardNormal)
        } else {
            0.0
        };
        *px = ((ink + noise).clamp(0.0, 1.0) * 255.0).round() as u8;
    }
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Writes the MNIST stand-in as the four standard IDX files into `dir`.
pub fn write_mnist_files(dir: &std::path::Path, dataset: &LabeledDataset) -> Result<()> {
    use super::{write_idx_images, write_idx_labels};
    for (split, img, lab) in [
        (dataset.train(), TRAIN_IMAGES, TRAIN_LABELS),
        (dataset.test(), TEST_IMAGES, TEST_LABELS),
    ] {
        let Features::Pixels(p) = split.features() else {
            unreachable!("D1 splits hold pixels")
        };
        write_idx_images(&dir.join(img), p, 28, 28)?;
        write_idx_labels(&dir.join(lab), split.labels())?;
    }
    Ok(())
}

pub const TRAIN_IMAGES: &str = "train-images-idx3-ubyte";
pub const TRAIN_LABELS: &str = "train-labels-idx1-ubyte";
pub const TEST_IMAGES: &str = "t10k-images-idx3-ubyte";
pub const TEST_LABELS: &str = "t10k-labels-idx1-ubyte";
pub const RBV1_FILE: &str = "rbv1.csv";
