//! Exclusivity between component weight vectors and the ℓ1,2 regularizer
//! built from it.
//!
//! For weight columns `w_c` of `W ∈ ℝ^{M×C}`:
//!
//! ```text
//! X(u, v)   = ‖u ⊙ v‖₀                 (exclusivity)
//! X_r(u, v) = Σᵢ |u(i)|·|v(i)|         (relaxed exclusivity)
//! Ψ(W)      = ½ Σⱼ (Σ_c |W(j,c)|)²
//!           = ½‖W‖_F² + Σ_{c<c̃} X_r(w_c, w_c̃)
//! ```

use ndarray::{Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Result, XrmError};

fn check_len(u: &ArrayView1<f64>, v: &ArrayView1<f64>) -> Result<()> {
    if u.len() != v.len() {
        return Err(XrmError::Dimension {
            context: "exclusivity operands",
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Number of coordinates where both vectors are nonzero. The zero test is exact.
pub fn exclusivity(u: ArrayView1<f64>, v: ArrayView1<f64>) -> Result<usize> {
    check_len(&u, &v)?;
    Ok(u.iter()
        .zip(v.iter())
        .filter(|(a, b)| *a * *b != 0.0)
        .count())
}

pub fn relaxed_exclusivity(u: ArrayView1<f64>, v: ArrayView1<f64>) -> Result<f64> {
    check_len(&u, &v)?;
    Ok(u.iter().zip(v.iter()).map(|(a, b)| a.abs() * b.abs()).sum())
}

/// `½‖Wᵀ‖₁,₂²`: half the sum over feature rows of the squared row ℓ1 norm.
pub fn exclusivity_regularizer(w: ArrayView2<f64>) -> Result<f64> {
    if w.iter().any(|v| !v.is_finite()) {
        return Err(XrmError::NonFinite("weight matrix"));
    }
    Ok(0.5
        * w.outer_iter()
            .map(|row| {
                let l1: f64 = row.iter().map(|v| v.abs()).sum();
                l1 * l1
            })
            .sum::<f64>())
}

/// Pairwise diversity of the columns of a weight matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityReport {
    #[serde(with = "crate::rows")]
    pub pairwise_relaxed_exclusivity: Array2<f64>,
    #[serde(with = "crate::rows")]
    pub pairwise_exclusivity: Array2<usize>,
    pub regularizer_value: f64,
}

pub fn diversity_report(w: ArrayView2<f64>) -> Result<DiversityReport> {
    let c = w.ncols();
    if c == 0 {
        return Err(XrmError::InvalidData(
            "weight matrix has no components".into(),
        ));
    }
    let regularizer_value = exclusivity_regularizer(w)?;
    let mut relaxed = Array2::zeros((c, c));
    let mut hard = Array2::zeros((c, c));
    for a in 0..c {
        for b in a..c {
            let r = relaxed_exclusivity(w.column(a), w.column(b))?;
            let h = exclusivity(w.column(a), w.column(b))?;
            relaxed[[a, b]] = r;
            relaxed[[b, a]] = r;
            hard[[a, b]] = h;
            hard[[b, a]] = h;
        }
    }
    Ok(DiversityReport {
        pairwise_relaxed_exclusivity: relaxed,
        pairwise_exclusivity: hard,
        regularizer_value,
    })
}
