//! Dense Cholesky factorization for the symmetric positive definite system
//! `(I + XXᵀ) P = R` solved once per outer iteration.

use ndarray::{Array2, ArrayView2, ArrayViewMut1, Axis};

use crate::error::{Result, XrmError};

/// Lower-triangular factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    lower: Array2<f64>,
}

impl Cholesky {
    pub fn factor(a: ArrayView2<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(XrmError::Dimension {
                context: "Cholesky input must be square",
                expected: n,
                found: a.ncols(),
            });
        }
        let mut l = Array2::<f64>::zeros((n, n));
        for j in 0..n {
            let mut d = a[[j, j]];
            for k in 0..j {
                d -= l[[j, k]] * l[[j, k]];
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(XrmError::Factorization { pivot: j });
            }
            let d = d.sqrt();
            l[[j, j]] = d;
            for i in j + 1..n {
                let mut s = a[[i, j]];
                for k in 0..j {
                    s -= l[[i, k]] * l[[j, k]];
                }
                l[[i, j]] = s / d;
            }
        }
        Ok(Self { lower: l })
    }

    /// `I + X Xᵀ` for a `features × instances` matrix.
    pub fn of_regularized_gram(x: ArrayView2<f64>) -> Result<Self> {
        let mut k = x.dot(&x.t());
        k.diag_mut().mapv_inplace(|v| v + 1.0);
        Self::factor(k.view())
    }

    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    fn solve_vec(&self, mut b: ArrayViewMut1<f64>) {
        let l = &self.lower;
        let n = self.dim();
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= l[[i, k]] * b[k];
            }
            b[i] = s / l[[i, i]];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= l[[k, i]] * b[k];
            }
            b[i] = s / l[[i, i]];
        }
    }

    /// Solves `A X = B` column by column, overwriting `B`.
    pub fn solve_in_place(&self, b: &mut Array2<f64>) -> Result<()> {
        if b.nrows() != self.dim() {
            return Err(XrmError::Dimension {
                context: "Cholesky right-hand side rows",
                expected: self.dim(),
                found: b.nrows(),
            });
        }
        for col in b.axis_iter_mut(Axis(1)) {
            self.solve_vec(col);
        }
        Ok(())
    }
}
