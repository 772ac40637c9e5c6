//! Slow reference solvers used to check the trainer.
//!
//! Nothing here calls into [`crate::solver`] or reuses its update formulas:
//! objectives are re-evaluated with plain loops and every minimization is done
//! by a generic method (subgradient descent, grid search, golden-section
//! coordinate descent, pivoted elimination). Not intended for production
//! training.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::dataset::DataSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Iteration budget for subgradient descent, or sweep budget for
    /// coordinate descent.
    pub max_iters: usize,
    /// Subgradient step at iteration t is `step0 / √t`, applied to the
    /// unit-normalized subgradient.
    pub step0: f64,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_step: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_iters: 50_000,
            step0: 1.0,
            grid_lo: -10.0,
            grid_hi: 10.0,
            grid_step: 1e-4,
        }
    }
}

/// Direct evaluation of
/// `½ Σⱼ (Σ_c |W(j,c)|)² + λ Σ_c Σᵢ (1 − (xᵢᵀw_c + b_c)yᵢ)₊ᵖ`.
pub fn ensemble_objective(
    w: &Array2<f64>,
    b: &Array1<f64>,
    data: &DataSet,
    lambda: f64,
    p: f64,
) -> f64 {
    let (m, c) = w.dim();
    let x = data.x();
    let y = data.y();
    let mut reg = 0.0;
    for j in 0..m {
        let mut row = 0.0;
        for k in 0..c {
            row += w[[j, k]].abs();
        }
        reg += row * row;
    }
    let mut loss = 0.0;
    for i in 0..data.instance_count() {
        for k in 0..c {
            let mut f = b[k];
            for j in 0..m {
                f += x[[j, i]] * w[[j, k]];
            }
            let slack = 1.0 - y[i] * f;
            if slack > 0.0 {
                loss += slack.powf(p);
            }
        }
    }
    0.5 * reg + lambda * loss
}

/// Loss of the averaged predictor, `Σᵢ (1 − (xᵢᵀw_e + b_e)yᵢ)₊ᵖ`.
pub fn averaged_predictor_loss(w: &Array2<f64>, b: &Array1<f64>, data: &DataSet, p: f64) -> f64 {
    let (m, c) = w.dim();
    let x = data.x();
    let y = data.y();
    let mut loss = 0.0;
    for i in 0..data.instance_count() {
        let mut f = 0.0;
        for k in 0..c {
            f += b[k];
            for j in 0..m {
                f += x[[j, i]] * w[[j, k]];
            }
        }
        f /= c as f64;
        let slack = 1.0 - y[i] * f;
        if slack > 0.0 {
            loss += slack.powf(p);
        }
    }
    loss
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub w: Array2<f64>,
    pub b: Array1<f64>,
    pub objective: f64,
}

/// Projected subgradient descent on the ensemble objective from `W = 0, b = 0`,
/// reporting the best iterate seen.
///
/// `W` is projected onto the Frobenius ball of radius `√(2λNC)`, which holds
/// every minimizer because the objective at zero is `λNC` and bounds `½‖W‖_F²`.
/// At a hinge kink the zero subgradient element is used, as is `sign(0) = 0`
/// in the regularizer.
pub fn reference_primal_solver(
    data: &DataSet,
    lambda: f64,
    components: usize,
    p: f64,
    config: &OracleConfig,
) -> ReferenceSolution {
    let m = data.feature_count();
    let n = data.instance_count();
    let c = components;
    let x = data.x();
    let y = data.y();
    let radius = (2.0 * lambda * (n * c) as f64).sqrt();

    let mut w = Array2::<f64>::zeros((m, c));
    let mut b = Array1::<f64>::zeros(c);
    let mut best = ReferenceSolution {
        objective: ensemble_objective(&w, &b, data, lambda, p),
        w: w.clone(),
        b: b.clone(),
    };
    let mut gw = Array2::<f64>::zeros((m, c));
    let mut gb = Array1::<f64>::zeros(c);

    for t in 1..=config.max_iters {
        gw.fill(0.0);
        gb.fill(0.0);
        for j in 0..m {
            let row_l1: f64 = (0..c).map(|k| w[[j, k]].abs()).sum();
            for k in 0..c {
                let v = w[[j, k]];
                let sign = if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                };
                gw[[j, k]] = row_l1 * sign;
            }
        }
        for i in 0..n {
            for k in 0..c {
                let mut f = b[k];
                for j in 0..m {
                    f += x[[j, i]] * w[[j, k]];
                }
                let slack = 1.0 - y[i] * f;
                if slack > 0.0 {
                    let coef = lambda * p * slack.powf(p - 1.0) * y[i];
                    for j in 0..m {
                        gw[[j, k]] -= coef * x[[j, i]];
                    }
                    gb[k] -= coef;
                }
            }
        }
        let norm =
            (gw.iter().map(|v| v * v).sum::<f64>() + gb.iter().map(|v| v * v).sum::<f64>()).sqrt();
        if norm == 0.0 {
            break;
        }
        let step = config.step0 / (t as f64).sqrt() / norm;
        w.scaled_add(-step, &gw);
        b.scaled_add(-step, &gb);
        let wn = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if wn > radius {
            w *= radius / wn;
        }

        let obj = ensemble_objective(&w, &b, data, lambda, p);
        if obj < best.objective {
            best.objective = obj;
            best.w.assign(&w);
            best.b.assign(&b);
        }
    }
    best
}

/// Grid argmin of `a·(y e)₊ᵖ + ½(e − s)²` over `[grid_lo, grid_hi]`.
pub fn scalar_e_minimizer(
    y: f64,
    s: f64,
    lambda_over_mu: f64,
    p: f64,
    config: &OracleConfig,
) -> f64 {
    let value = |e: f64| {
        let active = y * e;
        let loss = if active > 0.0 { active.powf(p) } else { 0.0 };
        lambda_over_mu * loss + 0.5 * (e - s) * (e - s)
    };
    let steps = ((config.grid_hi - config.grid_lo) / config.grid_step).round() as usize;
    let mut best_e = config.grid_lo;
    let mut best_v = value(best_e);
    for k in 1..=steps {
        let e = config.grid_lo + k as f64 * config.grid_step;
        let v = value(e);
        if v < best_v {
            best_v = v;
            best_e = e;
        }
    }
    best_e
}

/// `½(Σ_c |w(c)|)² + (μ/2)‖p − w‖² + ⟨q, p − w⟩`.
pub fn w_row_objective(w: &[f64], p_row: &[f64], q_row: &[f64], mu: f64) -> f64 {
    let l1: f64 = w.iter().map(|v| v.abs()).sum();
    let mut quad = 0.0;
    let mut lin = 0.0;
    for c in 0..w.len() {
        let d = p_row[c] - w[c];
        quad += d * d;
        lin += q_row[c] * d;
    }
    0.5 * l1 * l1 + 0.5 * mu * quad + lin
}

fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    // The kink at zero is a frequent minimizer; golden section only gets
    // within `tol` of it.
    if lo <= 0.0 && hi >= 0.0 && f(0.0) <= f(mid) {
        0.0
    } else {
        mid
    }
}

/// Minimizes one row of the W subproblem by cyclic coordinate descent with
/// golden-section line searches, starting from zero. Stops when a full sweep
/// improves the objective by less than 1e-15 (relative) or after
/// `config.max_iters` sweeps.
pub fn w_row_reference(p_row: &[f64], q_row: &[f64], mu: f64, config: &OracleConfig) -> Vec<f64> {
    let c = p_row.len();
    let mut w = vec![0.0; c];
    let mut current = w_row_objective(&w, p_row, q_row, mu);
    for _ in 0..config.max_iters {
        for k in 0..c {
            // Coordinate minimizer lies between 0 and the unpenalized target.
            let target = p_row[k] + q_row[k] / mu;
            let lo = target.min(0.0) - 1e-3;
            let hi = target.max(0.0) + 1e-3;
            let mut trial = w.clone();
            let best = golden_section(
                |v| {
                    trial[k] = v;
                    w_row_objective(&trial, p_row, q_row, mu)
                },
                lo,
                hi,
                1e-13 * (1.0 + target.abs()),
            );
            w[k] = best;
        }
        let next = w_row_objective(&w, p_row, q_row, mu);
        let improvement = current - next;
        current = next;
        if improvement <= 1e-15 * (1.0 + current.abs()) {
            break;
        }
    }
    w
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
/// Returns `None` for a numerically singular `A`.
pub fn dense_solve(a: &Array2<f64>, b: &Array2<f64>) -> Option<Array2<f64>> {
    let n = a.nrows();
    let k = b.ncols();
    let mut aug = Array2::<f64>::zeros((n, n + k));
    for i in 0..n {
        for j in 0..n {
            aug[[i, j]] = a[[i, j]];
        }
        for j in 0..k {
            aug[[i, n + j]] = b[[i, j]];
        }
    }
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&r, &s| aug[[r, col]].abs().total_cmp(&aug[[s, col]].abs()))?;
        if aug[[pivot, col]].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for j in 0..n + k {
                aug.swap([pivot, j], [col, j]);
            }
        }
        for r in col + 1..n {
            let f = aug[[r, col]] / aug[[col, col]];
            if f != 0.0 {
                for j in col..n + k {
                    aug[[r, j]] -= f * aug[[col, j]];
                }
            }
        }
    }
    let mut out = Array2::<f64>::zeros((n, k));
    for j in 0..k {
        for i in (0..n).rev() {
            let mut s = aug[[i, n + j]];
            for l in i + 1..n {
                s -= aug[[i, l]] * out[[l, j]];
            }
            out[[i, j]] = s / aug[[i, i]];
        }
    }
    Some(out)
}

/// Central-difference gradient of `f` at `x`.
pub fn numeric_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}
