use ndarray::{Array1, Axis};
use serde::{Deserialize, Serialize};

use super::DataSet;
use crate::error::{Result, XrmError};

/// Per-feature z-score transform fitted on one dataset and applied to others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    /// Constant features get scale 1 so they map to zero rather than NaN.
    pub fn fit(data: &DataSet) -> Self {
        let x = data.x();
        let n = data.instance_count() as f64;
        let mean = x.mean_axis(Axis(1)).expect("dataset has instances");
        let scale = x
            .axis_iter(Axis(0))
            .zip(mean.iter())
            .map(|(row, &mu)| {
                let var = row.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n;
                let sd = var.sqrt();
                if sd > 0.0 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Self {
            mean: mean.to_vec(),
            scale,
        }
    }

    pub fn apply(&self, data: &DataSet) -> Result<DataSet> {
        if data.feature_count() != self.mean.len() {
            return Err(XrmError::Dimension {
                context: "standardizer feature count",
                expected: self.mean.len(),
                found: data.feature_count(),
            });
        }
        let mean = Array1::from(self.mean.clone()).insert_axis(Axis(1));
        let scale = Array1::from(self.scale.clone()).insert_axis(Axis(1));
        let x = (data.x() - &mean) / &scale;
        DataSet::new(x, data.y().clone())
    }
}
