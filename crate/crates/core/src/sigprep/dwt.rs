//! Multilevel discrete wavelet transform with the 8-tap Daubechies (db4)
//! filter pair.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// db4 reconstruction low-pass (scaling) filter.
pub const DB4_REC_LO: [f64; 8] = [
    0.230_377_813_308_855_23,
    0.714_846_570_552_541_5,
    0.630_880_767_929_590_4,
    -0.027_983_769_416_983_85,
    -0.187_034_811_718_881_14,
    0.030_841_381_835_986_965,
    0.032_883_011_666_982_945,
    -0.010_597_401_784_997_278,
];

const TAPS: usize = DB4_REC_LO.len();

/// Decomposition filters `(dec_lo, dec_hi)`.
fn analysis_filters() -> ([f64; TAPS], [f64; TAPS]) {
    let mut lo = DB4_REC_LO;
    lo.reverse();
    let hi = std::array::from_fn(|k| {
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        sign * DB4_REC_LO[k]
    });
    (lo, hi)
}

/// Signal extension at the boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Circular extension; `ceil(n / 2)` coefficients per band, orthogonal.
    #[default]
    Periodization,
    /// Half-sample symmetric extension; `floor((n + 7) / 2)` coefficients.
    Symmetric,
}

/// One analysis level: returns `(approximation, detail)`.
pub fn dwt_step(x: &[f64], boundary: Boundary) -> (Vec<f64>, Vec<f64>) {
    let (lo, hi) = analysis_filters();
    match boundary {
        Boundary::Periodization => {
            let ext = even_extension(x);
            let n = ext.len();
            let half = n / 2;
            let mut a = vec![0.0; half];
            let mut d = vec![0.0; half];
            for k in 0..half {
                for j in 0..TAPS {
                    // correlate with the reversed decomposition filters
                    let v = ext[(2 * k + j) % n];
                    a[k] += lo[TAPS - 1 - j] * v;
                    d[k] += hi[TAPS - 1 - j] * v;
                }
            }
            (a, d)
        }
        Boundary::Symmetric => {
            let n = x.len();
            let len = (n + TAPS - 1) / 2;
            let at = |i: isize| -> f64 { x[symmetric_index(i, n)] };
            let mut a = vec![0.0; len];
            let mut d = vec![0.0; len];
            for o in 0..len {
                for j in 0..TAPS {
                    let v = at(2 * o as isize + 1 - j as isize);
                    a[o] += lo[j] * v;
                    d[o] += hi[j] * v;
                }
            }
            (a, d)
        }
    }
}

fn even_extension(x: &[f64]) -> Vec<f64> {
    let mut ext = x.to_vec();
    if ext.len() % 2 == 1 {
        ext.push(*x.last().expect("non-empty input"));
    }
    ext
}

fn symmetric_index(i: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    let mut k = i.rem_euclid(period);
    if k >= n {
        k = period - 1 - k;
    }
    k as usize
}

/// One synthesis level producing `out_len` samples.
pub fn idwt_step(a: &[f64], d: &[f64], out_len: usize, boundary: Boundary) -> Vec<f64> {
    let (lo, hi) = analysis_filters();
    match boundary {
        Boundary::Periodization => {
            let n = 2 * a.len();
            let mut x = vec![0.0; n];
            for k in 0..a.len() {
                for j in 0..TAPS {
                    x[(2 * k + j) % n] += lo[TAPS - 1 - j] * a[k] + hi[TAPS - 1 - j] * d[k];
                }
            }
            x.truncate(out_len);
            x
        }
        Boundary::Symmetric => {
            // x[n] = sum_o lo[2o + 1 - n] a[o] + hi[2o + 1 - n] d[o]
            let mut x = vec![0.0; out_len];
            for (n, xn) in x.iter_mut().enumerate() {
                let o_min = n.saturating_sub(1).div_ceil(2);
                for o in o_min..a.len() {
                    let j = 2 * o + 1 - n;
                    if j >= TAPS {
                        break;
                    }
                    *xn += lo[j] * a[o] + hi[j] * d[o];
                }
            }
            x
        }
    }
}

/// Approximation and detail arrays of every level, `A1..A{levels}` and
/// `D1..D{levels}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DwtDecomposition {
    pub approx: Vec<Vec<f64>>,
    pub detail: Vec<Vec<f64>>,
    pub boundary: Boundary,
    /// Input length at each level; `input_lengths[0]` is the signal length.
    pub input_lengths: Vec<usize>,
}

impl DwtDecomposition {
    pub fn levels(&self) -> usize {
        self.approx.len()
    }

    pub fn original_length(&self) -> usize {
        self.input_lengths[0]
    }

    /// Inverse transform from the deepest approximation and all details.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut a = self.approx.last().cloned().unwrap_or_default();
        for level in (0..self.levels()).rev() {
            a = idwt_step(&a, &self.detail[level], self.input_lengths[level], self.boundary);
        }
        a
    }
}

pub const DEFAULT_LEVELS: usize = 6;

pub fn dwt_db4(signal: &[f64], levels: usize) -> Result<DwtDecomposition> {
    dwt_db4_with(signal, levels, Boundary::Periodization)
}

pub fn dwt_db4_with(signal: &[f64], levels: usize, boundary: Boundary) -> Result<DwtDecomposition> {
    if levels == 0 {
        return Err(Error::domain("DWT needs at least one level"));
    }
    if signal.len() < 1 << levels {
        return Err(Error::domain(format!(
            "signal of length {} too short for {levels} levels (need {})",
            signal.len(),
            1usize << levels
        )));
    }
    let mut approx = Vec::with_capacity(levels);
    let mut detail = Vec::with_capacity(levels);
    let mut input_lengths = Vec::with_capacity(levels);
    let mut current = signal.to_vec();
    for _ in 0..levels {
        input_lengths.push(current.len());
        let (a, d) = dwt_step(&current, boundary);
        detail.push(d);
        approx.push(a.clone());
        current = a;
    }
    Ok(DwtDecomposition {
        approx,
        detail,
        boundary,
        input_lengths,
    })
}

/// One of the signal variants entropy is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Raw,
    Filtered,
    Approx(u8),
    Detail(u8),
}

impl Component {
    /// The 14 variants for a 6-level decomposition: raw, filtered, A1-A6,
    /// D1-D6.
    pub fn all(levels: u8) -> Vec<Component> {
        let mut v = vec![Component::Raw, Component::Filtered];
        v.extend((1..=levels).map(Component::Approx));
        v.extend((1..=levels).map(Component::Detail));
        v
    }

    /// Nominal frequency band `(low, high)` in Hz at sample rate `fs`.
    pub fn band(self, fs: f64) -> (f64, f64) {
        match self {
            Component::Raw | Component::Filtered => (0.0, fs / 2.0),
            Component::Approx(k) => (0.0, fs / f64::from(1u32 << (k + 1))),
            Component::Detail(k) => (
                fs / f64::from(1u32 << (k + 1)),
                fs / f64::from(1u32 << k),
            ),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Raw => f.write_str("RAW"),
            Component::Filtered => f.write_str("FILTERED"),
            Component::Approx(k) => write!(f, "A{k}"),
            Component::Detail(k) => write!(f, "D{k}"),
        }
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let u = s.trim().to_ascii_uppercase();
        let level = |rest: &str| -> Result<u8> {
            rest.parse::<u8>()
                .ok()
                .filter(|k| *k >= 1)
                .ok_or_else(|| Error::domain(format!("unknown component '{s}'")))
        };
        match u.as_str() {
            "RAW" => Ok(Component::Raw),
            "FILTERED" => Ok(Component::Filtered),
            _ if u.starts_with('A') => Ok(Component::Approx(level(&u[1..])?)),
            _ if u.starts_with('D') => Ok(Component::Detail(level(&u[1..])?)),
            _ => Err(Error::domain(format!("unknown component '{s}'"))),
        }
    }
}

/// Raw and filtered signal with the decomposition of the filtered one.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalVariants {
    pub raw: Vec<f64>,
    pub filtered: Vec<f64>,
    pub decomposition: DwtDecomposition,
}

/// The array selected by `selector`.
pub fn component_signal<'a>(variants: &'a SignalVariants, selector: Component) -> Result<&'a [f64]> {
    let levels = variants.decomposition.levels();
    let pick = |k: u8, bands: &'a [Vec<f64>]| -> Result<&'a [f64]> {
        let k = usize::from(k);
        if k == 0 || k > levels {
            return Err(Error::domain(format!(
                "component level {k} outside 1..={levels}"
            )));
        }
        Ok(&bands[k - 1])
    };
    match selector {
        Component::Raw => Ok(&variants.raw),
        Component::Filtered => Ok(&variants.filtered),
        Component::Approx(k) => pick(k, &variants.decomposition.approx),
        Component::Detail(k) => pick(k, &variants.decomposition.detail),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_identities() {
        let (lo, hi) = analysis_filters();
        let s: f64 = lo.iter().sum();
        assert!((s - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(hi.iter().sum::<f64>().abs() < 1e-12);
        let e: f64 = lo.iter().map(|v| v * v).sum();
        assert!((e - 1.0).abs() < 1e-12);
        // orthogonal to even shifts
        for shift in [2, 4, 6] {
            let c: f64 = (0..TAPS - shift).map(|i| lo[i] * lo[i + shift]).sum();
            assert!(c.abs() < 1e-12);
        }
    }

    #[test]
    fn lengths() {
        let x = vec![1.0; 1000];
        let p = dwt_db4(&x, 6).unwrap();
        let sizes: Vec<usize> = p.approx.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![500, 250, 125, 63, 32, 16]);
        let s = dwt_db4_with(&x, 6, Boundary::Symmetric).unwrap();
        let sizes: Vec<usize> = s.approx.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![503, 255, 131, 69, 38, 22]);
    }

    #[test]
    fn constant_signal_has_no_detail() {
        for boundary in [Boundary::Periodization, Boundary::Symmetric] {
            let d = dwt_db4_with(&vec![2.5; 512], 6, boundary).unwrap();
            for band in &d.detail {
                assert!(band.iter().all(|v| v.abs() <= 1e-10));
            }
            // each level scales the constant by sqrt(2)
            let a6 = d.approx[5][3];
            assert!((a6 - 2.5 * 8.0).abs() < 1e-9);
        }
    }

    #[test]
    fn both_boundaries_reconstruct() {
        let x: Vec<f64> = (0..777).map(|i| ((i * 37) % 101) as f64 / 50.0 - 1.0).collect();
        for boundary in [Boundary::Periodization, Boundary::Symmetric] {
            let d = dwt_db4_with(&x, 6, boundary).unwrap();
            let y = d.reconstruct();
            assert_eq!(y.len(), x.len());
            let err = x.iter().zip(&y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-10, "{boundary:?}: {err}");
        }
    }

    #[test]
    fn too_short_or_bad_selector() {
        assert!(dwt_db4(&[0.0; 63], 6).is_err());
        assert!(dwt_db4(&[0.0; 64], 6).is_ok());
        assert!("X3".parse::<Component>().is_err());
        assert!("A0".parse::<Component>().is_err());
        assert_eq!("a3".parse::<Component>().unwrap(), Component::Approx(3));
        assert_eq!("RAW".parse::<Component>().unwrap(), Component::Raw);
    }

    #[test]
    fn selectors() {
        let raw: Vec<f64> = (0..256).map(|i| (i as f64 * 0.3).sin()).collect();
        let variants = SignalVariants {
            raw: raw.clone(),
            filtered: raw.iter().map(|v| v * 0.5).collect(),
            decomposition: dwt_db4(&raw, 6).unwrap(),
        };
        assert_eq!(component_signal(&variants, Component::Raw).unwrap(), &raw[..]);
        assert_eq!(
            component_signal(&variants, Component::Detail(4)).unwrap(),
            &variants.decomposition.detail[3][..]
        );
        assert!(component_signal(&variants, Component::Approx(7)).is_err());
        assert_eq!(Component::all(6).len(), 14);
    }

    #[test]
    fn bands() {
        let fs = 500.0;
        assert_eq!(Component::Approx(3).band(fs), (0.0, 31.25));
        assert_eq!(Component::Detail(4).band(fs), (15.625, 31.25));
        assert_eq!(Component::Detail(1).band(fs), (125.0, 250.0));
    }
}
