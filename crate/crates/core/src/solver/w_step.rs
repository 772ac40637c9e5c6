//! Row-separable W subproblem
//!
//! ```text
//! min_W ½‖Wᵀ‖₁,₂² + (μ/2)‖P − W‖_F² + ⟨Q, P − W⟩
//! ```
//!
//! solved one feature row at a time by alternating a diagonal reweighting
//! `G = diag(‖w‖₁ / (|w_c| + ε))` with the ridge step
//! `w = (μ p + q) ⊘ (diag(G) + μ)`.

use ndarray::{Array1, Array2, ArrayView1, Axis, Zip};

use super::{SolverConfig, SolverState};

/// Diagonal of the reweighting matrix for one row. A zero row yields a
/// zero diagonal.
pub fn reweight_g(row: ArrayView1<f64>, epsilon: f64) -> Array1<f64> {
    let l1: f64 = row.iter().map(|v| v.abs()).sum();
    row.mapv(|v| l1 / (v.abs() + epsilon))
}

/// Minimizer of `½ wᵀ diag(g) w + (μ/2)‖p − w‖² + ⟨q, p − w⟩` for fixed `g`.
pub fn update_row(
    g_diag: ArrayView1<f64>,
    p_row: ArrayView1<f64>,
    q_row: ArrayView1<f64>,
    mu: f64,
) -> Array1<f64> {
    Zip::from(&g_diag)
        .and(&p_row)
        .and(&q_row)
        .map_collect(|&g, &p, &q| (mu * p + q) / (g + mu))
}

/// Reweighted iterations for one row, started from `start`.
pub fn solve_row(
    start: ArrayView1<f64>,
    p_row: ArrayView1<f64>,
    q_row: ArrayView1<f64>,
    mu: f64,
    config: &SolverConfig,
) -> Array1<f64> {
    let mut row = start.to_owned();
    for _ in 0..config.inner_max_iters {
        let g = reweight_g(row.view(), config.epsilon);
        let next = update_row(g.view(), p_row, q_row, mu);
        let change = next
            .iter()
            .zip(row.iter())
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        row = next;
        if change < config.inner_tol {
            break;
        }
    }
    row
}

/// Solves every feature row of the W subproblem, warm-started from the
/// current weights.
pub fn solve_w_subproblem(state: &SolverState, config: &SolverConfig) -> Array2<f64> {
    let mut out = Array2::zeros(state.weights.raw_dim());
    Zip::from(out.axis_iter_mut(Axis(0)))
        .and(state.weights.axis_iter(Axis(0)))
        .and(state.split_weights.axis_iter(Axis(0)))
        .and(state.weight_dual.axis_iter(Axis(0)))
        .for_each(|mut dst, start, p, q| {
            dst.assign(&solve_row(start, p, q, state.mu, config));
        });
    out
}
