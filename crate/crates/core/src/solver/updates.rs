//! Closed-form block updates for the bias, slack and split-weight blocks and
//! the multiplier ascent step.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis, Zip};

use super::SolverState;
use crate::dataset::DataSet;
use crate::error::{Result, XrmError};
use crate::linalg::Cholesky;

/// Column means of `Y − E − XᵀP − Z/μ`, the least-squares bias.
pub fn update_b(state: &SolverState, data: &DataSet) -> Array1<f64> {
    let xtp = data.x().t().dot(&state.split_weights);
    bias_from_scores(state, data.y().view(), &xtp)
}

pub(crate) fn bias_from_scores(
    state: &SolverState,
    y: ArrayView1<f64>,
    xtp: &Array2<f64>,
) -> Array1<f64> {
    let inv_mu = 1.0 / state.mu;
    let mut residual = -&state.slacks - xtp - &state.slack_dual * inv_mu;
    residual += &y.insert_axis(Axis(1));
    residual.mean_axis(Axis(0)).expect("at least one instance")
}

/// Soft-thresholding `sign(v)·max(|v| − τ, 0)`.
#[inline]
pub fn shrink(v: f64, tau: f64) -> f64 {
    v.signum() * (v.abs() - tau).max(0.0)
}

/// Scalar slack minimizer of `a·(y e)₊ᵖ + ½(e − s)²` with `a = λ/μ`.
///
/// Closed forms for `p ∈ {1, 2}`; otherwise bisection on the increasing
/// derivative `a p uᵖ⁻¹ + u − y s` over the active branch `u = y e ≥ 0`,
/// followed by a comparison with the inactive branch.
pub fn minimize_slack(y: f64, s: f64, a: f64, p: f64, tol: f64) -> f64 {
    let t = y * s;
    if t <= 0.0 || a == 0.0 {
        return s;
    }
    if p == 1.0 {
        return shrink(s, a);
    }
    if p == 2.0 {
        return s / (1.0 + 2.0 * a);
    }
    // The stationary point lies in [0, t]: the derivative is −t < 0 at 0 and
    // a p tᵖ⁻¹ ≥ 0 at t.
    let (mut lo, mut hi) = (0.0f64, t);
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if a * p * mid.powf(p - 1.0) + mid - t > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    let active = 0.5 * (lo + hi);
    let value = |u: f64| a * u.max(0.0).powf(p) + 0.5 * (u - t) * (u - t);
    // Inactive branch (u < 0) is best approached at u → 0⁻, value ½t².
    let u = if value(active) <= value(0.0) {
        active
    } else {
        0.0
    };
    y * u
}

/// Elementwise slack update for `S = Y − XᵀP − 1bᵀ − Z/μ`.
pub fn update_e(
    s: ArrayView2<f64>,
    y: ArrayView1<f64>,
    lambda: f64,
    mu: f64,
    p: f64,
    tol: f64,
) -> Result<Array2<f64>> {
    if !(p >= 1.0) {
        return Err(XrmError::Config(format!(
            "loss power {p} must be at least 1"
        )));
    }
    if s.nrows() != y.len() {
        return Err(XrmError::Dimension {
            context: "slack rows vs labels",
            expected: y.len(),
            found: s.nrows(),
        });
    }
    let a = lambda / mu;
    let mut out = Array2::zeros(s.raw_dim());
    Zip::from(out.axis_iter_mut(Axis(0)))
        .and(s.axis_iter(Axis(0)))
        .and(&y)
        .for_each(|mut dst, src, &yi| {
            Zip::from(&mut dst)
                .and(&src)
                .for_each(|d, &sv| *d = minimize_slack(yi, sv, a, p, tol));
        });
    Ok(out)
}

/// `S = Y − XᵀP − 1bᵀ − Z/μ` for the slack subproblem.
pub(crate) fn slack_target(
    state: &SolverState,
    y: ArrayView1<f64>,
    xtp: &Array2<f64>,
    b: &Array1<f64>,
) -> Array2<f64> {
    let mut s = -xtp - &state.slack_dual * (1.0 / state.mu);
    s -= b;
    s += &y.insert_axis(Axis(1));
    s
}

/// Split-weight update `(I + XXᵀ)⁻¹ (W − Q/μ + X(Y − 1bᵀ − Z/μ − E))` using
/// a factorization of `I + XXᵀ`.
pub fn update_p(
    state: &SolverState,
    w_new: &Array2<f64>,
    e_new: &Array2<f64>,
    b_new: &Array1<f64>,
    data: &DataSet,
    factor: &Cholesky,
) -> Result<Array2<f64>> {
    if factor.dim() != data.feature_count() {
        return Err(XrmError::Dimension {
            context: "factorization size vs feature count",
            expected: data.feature_count(),
            found: factor.dim(),
        });
    }
    let inv_mu = 1.0 / state.mu;
    let mut inner = -e_new - &state.slack_dual * inv_mu;
    inner -= b_new;
    inner += &data.y().view().insert_axis(Axis(1));
    let mut rhs = w_new - &state.weight_dual * inv_mu + data.x().dot(&inner);
    factor.solve_in_place(&mut rhs)?;
    Ok(rhs)
}

/// `E − Y + XᵀP + 1bᵀ`.
pub(crate) fn slack_gap(
    e: &Array2<f64>,
    y: ArrayView1<f64>,
    xtp: &Array2<f64>,
    b: &Array1<f64>,
) -> Array2<f64> {
    let mut gap = e + xtp;
    gap += b;
    gap -= &y.insert_axis(Axis(1));
    gap
}

/// Dual ascent on both constraints, then `μ ← min(ρμ, μ_cap)`.
/// Returns `(Z, Q, μ)`.
#[allow(clippy::too_many_arguments)]
pub fn update_multipliers(
    state: &SolverState,
    w_new: &Array2<f64>,
    e_new: &Array2<f64>,
    p_new: &Array2<f64>,
    b_new: &Array1<f64>,
    data: &DataSet,
    rho: f64,
    mu_cap: f64,
) -> (Array2<f64>, Array2<f64>, f64) {
    let xtp = data.x().t().dot(p_new);
    multipliers_from_gap(
        state,
        w_new,
        p_new,
        &slack_gap(e_new, data.y().view(), &xtp, b_new),
        rho,
        mu_cap,
    )
}

pub(crate) fn multipliers_from_gap(
    state: &SolverState,
    w_new: &Array2<f64>,
    p_new: &Array2<f64>,
    gap: &Array2<f64>,
    rho: f64,
    mu_cap: f64,
) -> (Array2<f64>, Array2<f64>, f64) {
    let mu = state.mu;
    let z = &state.slack_dual + &(gap * mu);
    let q = &state.weight_dual + &((p_new - w_new) * mu);
    (z, q, (rho * mu).min(mu_cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn shrink_behaviour() {
        assert_eq!(shrink(2.0, 0.5), 1.5);
        assert_eq!(shrink(-2.0, 0.5), -1.5);
        assert_eq!(shrink(0.3, 0.5), 0.0);
    }

    #[test]
    fn closed_form_slacks() {
        assert_eq!(minimize_slack(1.0, 2.0, 0.5, 1.0, 1e-10), 1.5);
        assert_eq!(minimize_slack(1.0, 0.3, 0.5, 1.0, 1e-10), 0.0);
        assert_eq!(minimize_slack(-1.0, 0.3, 0.5, 1.0, 1e-10), 0.3);
        assert_eq!(minimize_slack(1.0, 2.0, 0.5, 2.0, 1e-10), 1.0);
        assert_eq!(minimize_slack(-1.0, -2.0, 0.5, 2.0, 1e-10), -1.0);
    }

    #[test]
    fn general_power_is_stationary() {
        // a p u^(p-1) + u − t = 0 with a = 1, p = 1.5, t = 2.
        let e = minimize_slack(1.0, 2.0, 1.0, 1.5, 1e-12);
        let residual = 1.5 * e.sqrt() + e - 2.0;
        assert!(residual.abs() < 1e-10, "{e}");
        assert!((e - 0.72).abs() < 0.01);
    }

    #[test]
    fn vanishing_weight_returns_target() {
        for p in [1.0, 1.5, 2.0, 3.0] {
            let s = array![[1.5, -0.5], [0.25, 2.0]];
            let y = array![1.0, -1.0];
            let e = update_e(s.view(), y.view(), 0.0, 1.0, p, 1e-10).unwrap();
            assert_eq!(e, s);
        }
    }

    #[test]
    fn power_below_one_rejected() {
        let s = array![[1.0]];
        let y = array![1.0];
        assert!(update_e(s.view(), y.view(), 1.0, 1.0, 0.5, 1e-10).is_err());
    }
}
