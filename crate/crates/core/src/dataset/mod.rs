//! Labelled binary classification data held as a dense feature matrix.
//!
//! Instances are stored column-wise: `x` is `features × instances`, matching
//! the `X ∈ ℝ^{M×N}` layout the solver algebra is written against.

mod scale;
mod sparse;
mod split;
pub mod synthetic;

pub use scale::Standardizer;
pub use sparse::{parse_sparse_str, parse_sparse_text, read_sparse_file, write_sparse_text};
pub use split::{split, SplitSpec};

use ndarray::{Array1, Array2, ArrayView1, Axis};

use crate::error::{Result, XrmError};

/// Feature matrix and ±1 labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    x: Array2<f64>,
    y: Array1<f64>,
}

impl DataSet {
    /// Builds a dataset from a `features × instances` matrix and labels.
    ///
    /// Labels must already be in {−1, +1}; use [`map_labels`] for raw class values.
    pub fn new(x: Array2<f64>, y: Array1<f64>) -> Result<Self> {
        if x.nrows() == 0 {
            return Err(XrmError::InvalidData("no features".into()));
        }
        if x.ncols() == 0 || y.is_empty() {
            return Err(XrmError::EmptyInput);
        }
        if x.ncols() != y.len() {
            return Err(XrmError::Dimension {
                context: "label count vs instance count",
                expected: x.ncols(),
                found: y.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(XrmError::NonFinite("feature matrix"));
        }
        if let Some(bad) = y.iter().find(|&&l| l != 1.0 && l != -1.0) {
            return Err(XrmError::InvalidData(format!("label {bad} is not ±1")));
        }
        Ok(Self { x, y })
    }

    /// `features × instances` matrix.
    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    pub fn y(&self) -> &Array1<f64> {
        &self.y
    }

    pub fn feature_count(&self) -> usize {
        self.x.nrows()
    }

    pub fn instance_count(&self) -> usize {
        self.x.ncols()
    }

    pub fn instance(&self, i: usize) -> ArrayView1<'_, f64> {
        self.x.column(i)
    }

    /// Dataset restricted to the given instance indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(XrmError::EmptyInput);
        }
        let x = self.x.select(Axis(1), indices);
        let y = self.y.select(Axis(0), indices);
        Ok(Self { x, y })
    }

    /// Same instances with a wider feature space; new rows are zero.
    pub fn with_feature_count(&self, features: usize) -> Result<Self> {
        let m = self.feature_count();
        if features < m {
            return Err(XrmError::Dimension {
                context: "feature count cannot shrink",
                expected: m,
                found: features,
            });
        }
        let mut x = Array2::zeros((features, self.instance_count()));
        x.slice_mut(ndarray::s![..m, ..]).assign(&self.x);
        Ok(Self {
            x,
            y: self.y.clone(),
        })
    }

    /// Number of positive and negative labels.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.y.iter().filter(|&&l| l > 0.0).count();
        (pos, self.y.len() - pos)
    }
}

/// Maps a two-valued label vector onto {−1, +1}: the larger raw value becomes +1.
pub fn map_labels(raw: &[f64]) -> Result<Vec<f64>> {
    let mut distinct: Vec<f64> = Vec::new();
    for &v in raw {
        if !v.is_finite() {
            return Err(XrmError::NonFinite("labels"));
        }
        if !distinct.contains(&v) {
            distinct.push(v);
        }
    }
    distinct.sort_by(f64::total_cmp);
    if distinct.len() != 2 {
        return Err(XrmError::Labels { observed: distinct });
    }
    let hi = distinct[1];
    Ok(raw
        .iter()
        .map(|&v| if v == hi { 1.0 } else { -1.0 })
        .collect())
}
