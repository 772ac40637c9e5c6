//! Trained ensemble, prediction and loss evaluation.
//!
//! The ensemble predictor is the uniform average of the components,
//! `w_e = (1/C) Σ w_c` and `b_e = (1/C) Σ b_c`.

use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::dataset::{DataSet, Standardizer};
use crate::error::{Result, XrmError};

pub const MODEL_FORMAT: &str = "xrm-model/1";

/// `(1 − y·f)₊ᵖ`.
#[inline]
pub fn hinge_power(y: f64, score: f64, p: f64) -> f64 {
    let slack = 1.0 - y * score;
    if slack > 0.0 {
        if p == 1.0 {
            slack
        } else if p == 2.0 {
            slack * slack
        } else {
            slack.powf(p)
        }
    } else {
        0.0
    }
}

/// `Σ_c Σ_i (1 − (xᵢᵀw_c + b_c)yᵢ)₊ᵖ` over all components.
pub fn component_loss_total(w: ArrayView2<f64>, b: ArrayView1<f64>, data: &DataSet, p: f64) -> f64 {
    let mut scores = data.x().t().dot(&w);
    scores += &b;
    let y = data.y();
    scores
        .axis_iter(Axis(0))
        .zip(y.iter())
        .map(|(row, &yi)| row.iter().map(|&s| hinge_power(yi, s, p)).sum::<f64>())
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleModel {
    w: Array2<f64>,
    b: Array1<f64>,
    w_e: Array1<f64>,
    b_e: f64,
    pub lambda: f64,
    pub p: f64,
}

/// Result of comparing the ensemble loss against the mean component loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub holds: bool,
    pub ensemble_loss: f64,
    pub average_component_loss: f64,
}

impl EnsembleModel {
    pub fn new(w: Array2<f64>, b: Array1<f64>, lambda: f64, p: f64) -> Result<Self> {
        if w.ncols() == 0 || w.nrows() == 0 {
            return Err(XrmError::InvalidData("empty weight matrix".into()));
        }
        if b.len() != w.ncols() {
            return Err(XrmError::Dimension {
                context: "bias count vs component count",
                expected: w.ncols(),
                found: b.len(),
            });
        }
        if w.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(XrmError::NonFinite("model parameters"));
        }
        let w_e = w.mean_axis(Axis(1)).expect("nonempty");
        let b_e = b.mean().expect("nonempty");
        Ok(Self {
            w,
            b,
            w_e,
            b_e,
            lambda,
            p,
        })
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.w
    }

    pub fn biases(&self) -> &Array1<f64> {
        &self.b
    }

    pub fn ensemble_weights(&self) -> &Array1<f64> {
        &self.w_e
    }

    pub fn ensemble_bias(&self) -> f64 {
        self.b_e
    }

    pub fn feature_count(&self) -> usize {
        self.w.nrows()
    }

    pub fn component_count(&self) -> usize {
        self.w.ncols()
    }

    /// Recomputes the averages from `W` and `b` and compares them with the
    /// cached ensemble parameters.
    pub fn averages_consistent(&self, tol: f64) -> bool {
        let w_e = self.w.mean_axis(Axis(1)).expect("nonempty");
        let b_e = self.b.mean().expect("nonempty");
        (b_e - self.b_e).abs() <= tol
            && w_e
                .iter()
                .zip(self.w_e.iter())
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn check_dimensions(&self, data: &DataSet) -> Result<()> {
        if data.feature_count() != self.feature_count() {
            return Err(XrmError::Dimension {
                context: "model features vs data features",
                expected: self.feature_count(),
                found: data.feature_count(),
            });
        }
        Ok(())
    }

    pub fn decision_value(&self, x: ArrayView1<f64>) -> Result<f64> {
        if x.len() != self.feature_count() {
            return Err(XrmError::Dimension {
                context: "model features vs instance length",
                expected: self.feature_count(),
                found: x.len(),
            });
        }
        Ok(x.dot(&self.w_e) + self.b_e)
    }

    /// Sign of the decision value; an exact zero is labelled +1.
    pub fn predict(&self, x: ArrayView1<f64>) -> Result<f64> {
        Ok(if self.decision_value(x)? >= 0.0 {
            1.0
        } else {
            -1.0
        })
    }

    /// `Σᵢ (1 − (xᵢᵀw_e + b_e)yᵢ)₊ᵖ`.
    pub fn ensemble_loss(&self, data: &DataSet, p: f64) -> Result<f64> {
        self.check_dimensions(data)?;
        let scores = data.x().t().dot(&self.w_e) + self.b_e;
        Ok(scores
            .iter()
            .zip(data.y().iter())
            .map(|(&s, &y)| hinge_power(y, s, p))
            .sum())
    }

    /// `(1/C) Σ_c Σᵢ (1 − (xᵢᵀw_c + b_c)yᵢ)₊ᵖ`.
    pub fn average_component_loss(&self, data: &DataSet, p: f64) -> Result<f64> {
        self.check_dimensions(data)?;
        Ok(component_loss_total(self.w.view(), self.b.view(), data, p)
            / self.component_count() as f64)
    }

    /// Jensen bound: the averaged predictor never loses more than the
    /// average component.
    pub fn verify_ensemble_bound(&self, data: &DataSet, p: f64) -> Result<BoundCheck> {
        let ensemble_loss = self.ensemble_loss(data, p)?;
        let average_component_loss = self.average_component_loss(data, p)?;
        Ok(BoundCheck {
            holds: ensemble_loss <= average_component_loss + 1e-9,
            ensemble_loss,
            average_component_loss,
        })
    }

    /// Fraction of misclassified instances.
    pub fn test_error(&self, data: &DataSet) -> Result<f64> {
        self.check_dimensions(data)?;
        let scores = data.x().t().dot(&self.w_e) + self.b_e;
        let wrong = scores
            .iter()
            .zip(data.y().iter())
            .filter(|(&s, &y)| (if s >= 0.0 { 1.0 } else { -1.0 }) != y)
            .count();
        Ok(wrong as f64 / data.instance_count() as f64)
    }
}

/// On-disk model: weights row-major plus optional preprocessing that callers
/// must apply to raw features before evaluating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub features: usize,
    pub components: usize,
    /// `W` in row-major order (`features × components`).
    pub w: Vec<f64>,
    pub b: Vec<f64>,
    pub lambda: f64,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standardizer: Option<Standardizer>,
}

impl ModelFile {
    pub fn new(model: &EnsembleModel, standardizer: Option<Standardizer>) -> Self {
        Self {
            format: MODEL_FORMAT.to_string(),
            features: model.feature_count(),
            components: model.component_count(),
            w: model.w.iter().copied().collect(),
            b: model.b.to_vec(),
            lambda: model.lambda,
            p: model.p,
            standardizer,
        }
    }

    pub fn to_model(&self) -> Result<EnsembleModel> {
        if self.format != MODEL_FORMAT {
            return Err(XrmError::ModelFormat(format!(
                "unsupported format {:?}, expected {MODEL_FORMAT:?}",
                self.format
            )));
        }
        let w = Array2::from_shape_vec((self.features, self.components), self.w.clone())
            .map_err(|e| XrmError::ModelFormat(format!("weights: {e}")))?;
        EnsembleModel::new(w, Array1::from(self.b.clone()), self.lambda, self.p)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn model(w: Array2<f64>, b: Array1<f64>) -> EnsembleModel {
        EnsembleModel::new(w, b, 2.0, 2.0).unwrap()
    }

    #[test]
    fn decision_value_uses_averages() {
        let m = model(array![[1.0], [0.0]], array![-1.0]);
        assert_eq!(m.decision_value(array![1.0, 0.0].view()).unwrap(), 0.0);
        let m = model(array![[0.0, 0.0]], array![0.5, 0.5]);
        assert_eq!(m.decision_value(array![7.0].view()).unwrap(), 0.5);
        let m = model(array![[2.0, 0.0]], array![0.0, 0.0]);
        assert_eq!(m.decision_value(array![1.0].view()).unwrap(), 1.0);
        assert!(m.decision_value(array![1.0, 2.0].view()).is_err());
    }

    #[test]
    fn predict_signs_and_tie_break() {
        let m = model(array![[1.0]], array![0.0]);
        assert_eq!(m.predict(array![0.3].view()).unwrap(), 1.0);
        assert_eq!(m.predict(array![-0.3].view()).unwrap(), -1.0);
        assert_eq!(m.predict(array![0.0].view()).unwrap(), 1.0);
    }

    #[test]
    fn losses_on_simple_data() {
        let sep = DataSet::new(array![[2.0, -3.0]], array![1.0, -1.0]).unwrap();
        let m = model(array![[1.0]], array![0.0]);
        assert_eq!(m.ensemble_loss(&sep, 1.0).unwrap(), 0.0);

        let three = DataSet::new(array![[1.0, 2.0, 3.0]], array![1.0, -1.0, 1.0]).unwrap();
        let zero = model(array![[0.0]], array![0.0]);
        assert_eq!(zero.ensemble_loss(&three, 2.0).unwrap(), 3.0);
    }

    #[test]
    fn identical_components_meet_bound_with_equality() {
        let d = DataSet::new(array![[1.0, -0.5, 0.2]], array![1.0, 1.0, -1.0]).unwrap();
        let m = model(array![[0.3, 0.3, 0.3]], array![0.1, 0.1, 0.1]);
        let check = m.verify_ensemble_bound(&d, 2.0).unwrap();
        assert!(check.holds);
        assert!((check.ensemble_loss - check.average_component_loss).abs() < 1e-12);
        let one = model(array![[0.3]], array![0.1]);
        assert_eq!(
            one.ensemble_loss(&d, 1.0).unwrap(),
            one.average_component_loss(&d, 1.0).unwrap()
        );
    }

    #[test]
    fn test_error_fractions() {
        let d = DataSet::new(array![[1.0, 2.0, -1.0, -2.0]], array![1.0, 1.0, -1.0, -1.0]).unwrap();
        assert_eq!(
            model(array![[1.0]], array![0.0]).test_error(&d).unwrap(),
            0.0
        );
        assert_eq!(
            model(array![[-1.0]], array![0.0]).test_error(&d).unwrap(),
            1.0
        );
        assert_eq!(
            model(array![[0.0]], array![1.0]).test_error(&d).unwrap(),
            0.5
        );
    }

    #[test]
    fn model_file_round_trip_and_version_check() {
        let m = model(
            array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]],
            array![0.5, -0.5],
        );
        let file = ModelFile::new(&m, None);
        assert_eq!(file.w, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let back = ModelFile::from_json(&file.to_json().unwrap())
            .unwrap()
            .to_model()
            .unwrap();
        assert_eq!(back, m);
        assert!(back.averages_consistent(0.0));

        let mut bad = file.clone();
        bad.format = "xrm-model/0".into();
        assert!(bad.to_model().is_err());
        let mut ragged = file;
        ragged.w.pop();
        assert!(ragged.to_model().is_err());
    }

    #[test]
    fn mismatched_dimensions_name_both_sizes() {
        let m = model(array![[1.0], [1.0]], array![0.0]);
        let d = DataSet::new(array![[1.0]], array![1.0]).unwrap();
        let err = m.test_error(&d).unwrap_err().to_string();
        assert!(err.contains('2') && err.contains('1'), "{err}");
    }
}
