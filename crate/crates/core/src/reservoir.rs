//! Writing a time series into the reservoir matrix `W`.
//!
//! `W` has [`P_MAX`] rows and one column per classifier input (bias
//! included). The six filling methods differ in traversal order (row-major
//! for M1-M3, column-major for M4-M6) and in how a series shorter than the
//! matrix is extended to cover every cell:
//!
//! * M1/M4 repeat the series cyclically,
//! * M2/M5 repeat the series followed by a single `0.0`,
//! * M3/M6 stretch the series by nearest-index resampling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::DatasetKind;
use crate::error::{Error, Result};

/// Rows of `W`, i.e. the width of the hidden vector `Sh`.
pub const P_MAX: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FillMethod {
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
}

impl FillMethod {
    pub const ALL: [FillMethod; 6] = [
        FillMethod::M1,
        FillMethod::M2,
        FillMethod::M3,
        FillMethod::M4,
        FillMethod::M5,
        FillMethod::M6,
    ];

    /// 1-based method number.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1..=6 => Ok(Self::ALL[usize::from(n - 1)]),
            _ => Err(Error::domain(format!("fill method {n} outside 1..=6"))),
        }
    }

    fn column_major(self) -> bool {
        matches!(self, FillMethod::M4 | FillMethod::M5 | FillMethod::M6)
    }
}

impl fmt::Display for FillMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.number())
    }
}

impl FromStr for FillMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t.strip_prefix(['m', 'M']).unwrap_or(t);
        digits
            .parse::<u8>()
            .map_err(|_| Error::Config(format!("unknown fill method '{s}'")))
            .and_then(Self::from_number)
    }
}

/// Reservoir geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReservoirShape {
    pub rows: usize,
    pub cols: usize,
}

impl ReservoirShape {
    pub fn for_dataset(kind: DatasetKind) -> Self {
        ReservoirShape {
            rows: P_MAX,
            cols: kind.input_dim(),
        }
    }

    /// Longest series the reservoir holds, `N_max`.
    pub fn capacity(self) -> usize {
        self.rows * self.cols
    }
}

/// The filled matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirMatrix {
    w: Vec<f64>,
    shape: ReservoirShape,
    method: FillMethod,
}

impl ReservoirMatrix {
    pub fn rows(&self) -> usize {
        self.shape.rows
    }

    pub fn cols(&self) -> usize {
        self.shape.cols
    }

    pub fn shape(&self) -> ReservoirShape {
        self.shape
    }

    pub fn method(&self) -> FillMethod {
        self.method
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.w[row * self.shape.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.w[row * self.shape.cols..(row + 1) * self.shape.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }
}

/// Fills the reservoir for `dataset_kind` from `series`.
pub fn fill_reservoir(
    series: &[f64],
    method: FillMethod,
    dataset_kind: DatasetKind,
) -> Result<ReservoirMatrix> {
    fill_matrix(series, method, ReservoirShape::for_dataset(dataset_kind))
}

/// Fills a reservoir of arbitrary shape.
pub fn fill_matrix(
    series: &[f64],
    method: FillMethod,
    shape: ReservoirShape,
) -> Result<ReservoirMatrix> {
    let n = series.len();
    let capacity = shape.capacity();
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    if n > capacity {
        return Err(Error::SeriesTooLong { len: n, capacity });
    }
    if let Some(i) = series.iter().position(|x| !x.is_finite()) {
        return Err(Error::domain(format!("series value at index {i} is not finite")));
    }

    let source = |j: usize| -> f64 {
        match method {
            FillMethod::M1 | FillMethod::M4 => series[j % n],
            FillMethod::M2 | FillMethod::M5 => series.get(j % (n + 1)).copied().unwrap_or(0.0),
            FillMethod::M3 | FillMethod::M6 => {
                if capacity == 1 {
                    series[0]
                } else {
                    let pos = (j * (n - 1)) as f64 / (capacity - 1) as f64;
                    series[pos.round() as usize]
                }
            }
        }
    };

    let mut w = vec![0.0; capacity];
    if method.column_major() {
        for j in 0..capacity {
            let (col, row) = (j / shape.rows, j % shape.rows);
            w[row * shape.cols + col] = source(j);
        }
    } else {
        for (j, cell) in w.iter_mut().enumerate() {
            *cell = source(j);
        }
    }
    Ok(ReservoirMatrix { w, shape, method })
}
