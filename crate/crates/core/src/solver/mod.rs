//! Augmented Lagrangian training of an exclusivity-regularized ensemble.
//!
//! The training problem
//!
//! ```text
//! min_{W,b} ½‖Wᵀ‖₁,₂² + λ Σ_c Σ_i (1 − (xᵢᵀw_c + b_c) yᵢ)₊ᵖ
//! ```
//!
//! is split with `P = W` and `E = Y − (XᵀP + 1bᵀ)` and solved by cycling
//! through the W, b, E and P blocks followed by a multiplier step with a
//! geometrically growing penalty `μ`.

mod updates;
mod w_step;

pub use updates::{minimize_slack, shrink, update_b, update_e, update_multipliers, update_p};
pub use w_step::{reweight_g, solve_row, solve_w_subproblem, update_row};

use std::time::Instant;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::dataset::DataSet;
use crate::diversity::{diversity_report, exclusivity_regularizer, DiversityReport};
use crate::error::{Result, XrmError};
use crate::linalg::Cholesky;
use crate::model::{component_loss_total, EnsembleModel};

/// Hyperparameters and stopping rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Loss weight λ.
    pub lambda: f64,
    /// Number of ensemble components C.
    pub components: usize,
    /// Hinge loss exponent p ≥ 1.
    pub loss_power: f64,
    /// Penalty growth factor ρ > 1.
    pub rho: f64,
    /// Guard in the reweighting denominators.
    pub epsilon: f64,
    pub mu_init: f64,
    pub mu_cap: f64,
    /// Stop once the primal objective changes by less than this between
    /// outer iterations (and the constraints are satisfied to `residual_tol`).
    pub outer_tol: f64,
    /// Frobenius bound on both constraint residuals required to stop.
    pub residual_tol: f64,
    pub outer_max_iters: usize,
    pub inner_tol: f64,
    pub inner_max_iters: usize,
    /// Bisection width for slack updates with p ∉ {1, 2}.
    pub general_p_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            components: 10,
            loss_power: 2.0,
            rho: 1.1,
            epsilon: 1e-10,
            mu_init: 1.0,
            mu_cap: 1e10,
            outer_tol: 0.05,
            residual_tol: 1e-3,
            outer_max_iters: 300,
            inner_tol: 1e-8,
            inner_max_iters: 100,
            general_p_tol: 1e-10,
        }
    }
}

impl SolverConfig {
    /// Bounded penalty and tight stopping rules.
    ///
    /// With unbounded geometric growth the iterates can settle at a feasible
    /// point slightly above the optimum on small problems, because the
    /// per-iteration movement shrinks like `1/μ`. Holding `μ ≤ 5` keeps the
    /// method converging to the minimizer at the cost of more iterations.
    ///
    /// The inner reweighting loop also gets a long budget: a coordinate whose
    /// optimum sits just at the zero threshold decays towards zero at a rate
    /// close to one.
    pub fn tight() -> Self {
        Self {
            mu_cap: 5.0,
            outer_tol: 1e-9,
            residual_tol: 1e-6,
            outer_max_iters: 50_000,
            inner_tol: 1e-12,
            inner_max_iters: 10_000,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(XrmError::Config(m));
        let positive = [
            ("lambda", self.lambda),
            ("epsilon", self.epsilon),
            ("mu_init", self.mu_init),
            ("mu_cap", self.mu_cap),
            ("outer_tol", self.outer_tol),
            ("residual_tol", self.residual_tol),
            ("inner_tol", self.inner_tol),
            ("general_p_tol", self.general_p_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return fail(format!("{name} must be positive, got {v}"));
            }
        }
        if self.components == 0 {
            return fail("components must be at least 1".into());
        }
        if !(self.loss_power >= 1.0) || !self.loss_power.is_finite() {
            return fail(format!(
                "loss_power must be a finite value ≥ 1, got {}",
                self.loss_power
            ));
        }
        if !(self.rho > 1.0) {
            return fail(format!("rho must exceed 1, got {}", self.rho));
        }
        if self.outer_max_iters == 0 || self.inner_max_iters == 0 {
            return fail("iteration caps must be at least 1".into());
        }
        Ok(())
    }
}

/// ALM iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    /// `W`, features × components.
    pub weights: Array2<f64>,
    /// `b`, one bias per component.
    pub biases: Array1<f64>,
    /// `E`, instances × components; `E = Y − XᵀP − 1bᵀ` at feasibility.
    pub slacks: Array2<f64>,
    /// `P`, the copy of `W` that carries the data-fit coupling.
    pub split_weights: Array2<f64>,
    /// `Q`, multiplier of `P = W`.
    pub weight_dual: Array2<f64>,
    /// `Z`, multiplier of the slack constraint.
    pub slack_dual: Array2<f64>,
    pub mu: f64,
    pub iteration: usize,
}

impl SolverState {
    /// `W = 1`, `b = 0`, `P = 0`, `Q = 1`, `Z = 0`, `μ = μ₀`. Slacks start at
    /// `Y`, which satisfies the slack constraint for `P = 0`, `b = 0`.
    pub fn initial(data: &DataSet, components: usize, mu_init: f64) -> Self {
        let m = data.feature_count();
        let n = data.instance_count();
        let y = data.y();
        Self {
            weights: Array2::ones((m, components)),
            biases: Array1::zeros(components),
            slacks: Array2::from_shape_fn((n, components), |(i, _)| y[i]),
            split_weights: Array2::zeros((m, components)),
            weight_dual: Array2::ones((m, components)),
            slack_dual: Array2::zeros((n, components)),
            mu: mu_init,
            iteration: 0,
        }
    }

    fn is_finite(&self) -> Option<&'static str> {
        let checks: [(&'static str, bool); 7] = [
            ("weights", self.weights.iter().all(|v| v.is_finite())),
            ("biases", self.biases.iter().all(|v| v.is_finite())),
            ("slacks", self.slacks.iter().all(|v| v.is_finite())),
            (
                "split weights",
                self.split_weights.iter().all(|v| v.is_finite()),
            ),
            (
                "weight multiplier",
                self.weight_dual.iter().all(|v| v.is_finite()),
            ),
            (
                "slack multiplier",
                self.slack_dual.iter().all(|v| v.is_finite()),
            ),
            ("penalty", self.mu.is_finite()),
        ];
        checks.iter().find(|(_, ok)| !ok).map(|(name, _)| *name)
    }
}

/// Per-run diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Primal objective after each outer iteration.
    pub objective_trace: Vec<f64>,
    /// `(‖P − W‖_F, ‖E − Y + XᵀP + 1bᵀ‖_F)` after each outer iteration.
    pub residual_trace: Vec<(f64, f64)>,
    /// Largest absolute entry of `(Q, Z)` after each outer iteration.
    pub multiplier_trace: Vec<(f64, f64)>,
    pub iterations: usize,
    /// Whether the stopping rule fired before the iteration cap.
    pub converged: bool,
    /// Seconds; zero when timing is suppressed.
    pub wall_time: f64,
    pub config: SolverConfig,
    pub diversity: DiversityReport,
}

impl TrainReport {
    pub fn final_objective(&self) -> f64 {
        *self.objective_trace.last().expect("at least one iteration")
    }

    pub fn final_residuals(&self) -> (f64, f64) {
        *self.residual_trace.last().expect("at least one iteration")
    }
}

/// `½‖Wᵀ‖₁,₂² + λ Σ_c Σ_i (1 − (xᵢᵀw_c + b_c)yᵢ)₊ᵖ`.
pub fn primal_objective(
    w: ArrayView2<f64>,
    b: ArrayView1<f64>,
    data: &DataSet,
    lambda: f64,
    p: f64,
) -> Result<f64> {
    if w.nrows() != data.feature_count() {
        return Err(XrmError::Dimension {
            context: "weight rows vs feature count",
            expected: data.feature_count(),
            found: w.nrows(),
        });
    }
    if b.len() != w.ncols() {
        return Err(XrmError::Dimension {
            context: "bias count vs component count",
            expected: w.ncols(),
            found: b.len(),
        });
    }
    Ok(exclusivity_regularizer(w)? + lambda * component_loss_total(w, b, data, p))
}

fn frobenius(m: &Array2<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn max_abs(m: &Array2<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// `(‖P − W‖_F, ‖E − Y + XᵀP + 1bᵀ‖_F)`.
pub fn constraint_residuals(state: &SolverState, data: &DataSet) -> (f64, f64) {
    let xtp = data.x().t().dot(&state.split_weights);
    let gap = updates::slack_gap(&state.slacks, data.y().view(), &xtp, &state.biases);
    (
        frobenius(&(&state.split_weights - &state.weights)),
        frobenius(&gap),
    )
}

/// Runs the outer ALM loop from the standard initial state.
pub fn train(data: &DataSet, config: &SolverConfig) -> Result<(EnsembleModel, TrainReport)> {
    let state = SolverState::initial(data, config.components, config.mu_init);
    train_from(data, config, state)
}

/// Runs the outer ALM loop from a caller-supplied state.
pub fn train_from(
    data: &DataSet,
    config: &SolverConfig,
    mut state: SolverState,
) -> Result<(EnsembleModel, TrainReport)> {
    config.validate()?;
    let (m, n, c) = (
        data.feature_count(),
        data.instance_count(),
        config.components,
    );
    if state.weights.dim() != (m, c) || state.slacks.dim() != (n, c) {
        return Err(XrmError::Dimension {
            context: "initial state shape vs data",
            expected: m * c + n * c,
            found: state.weights.len() + state.slacks.len(),
        });
    }
    let started = Instant::now();
    let factor = Cholesky::of_regularized_gram(data.x().view())?;
    let x = data.x();
    let y = data.y().view();
    let (lambda, p) = (config.lambda, config.loss_power);

    let mut objective_trace = Vec::new();
    let mut residual_trace = Vec::new();
    let mut multiplier_trace = Vec::new();
    let mut previous =
        primal_objective(state.weights.view(), state.biases.view(), data, lambda, p)?;
    let mut xtp = x.t().dot(&state.split_weights);
    let mut converged = false;

    while state.iteration < config.outer_max_iters {
        let w_new = solve_w_subproblem(&state, config);
        let b_new = updates::bias_from_scores(&state, y, &xtp);
        let s = updates::slack_target(&state, y, &xtp, &b_new);
        let e_new = update_e(s.view(), y, lambda, state.mu, p, config.general_p_tol)?;
        let p_new = update_p(&state, &w_new, &e_new, &b_new, data, &factor)?;
        xtp = x.t().dot(&p_new);
        let gap = updates::slack_gap(&e_new, y, &xtp, &b_new);
        let (z, q, mu) =
            updates::multipliers_from_gap(&state, &w_new, &p_new, &gap, config.rho, config.mu_cap);

        let residuals = (frobenius(&(&p_new - &w_new)), frobenius(&gap));
        state = SolverState {
            weights: w_new,
            biases: b_new,
            slacks: e_new,
            split_weights: p_new,
            weight_dual: q,
            slack_dual: z,
            mu,
            iteration: state.iteration + 1,
        };
        if let Some(what) = state.is_finite() {
            return Err(XrmError::Diverged {
                iteration: state.iteration,
                what,
            });
        }

        let objective =
            primal_objective(state.weights.view(), state.biases.view(), data, lambda, p)?;
        objective_trace.push(objective);
        residual_trace.push(residuals);
        multiplier_trace.push((max_abs(&state.weight_dual), max_abs(&state.slack_dual)));

        let settled = (objective - previous).abs() < config.outer_tol;
        let feasible = residuals.0 < config.residual_tol && residuals.1 < config.residual_tol;
        previous = objective;
        if settled && feasible {
            converged = true;
            break;
        }
    }

    let model = EnsembleModel::new(state.weights.clone(), state.biases.clone(), lambda, p)?;
    let report = TrainReport {
        objective_trace,
        residual_trace,
        multiplier_trace,
        iterations: state.iteration,
        converged,
        wall_time: started.elapsed().as_secs_f64(),
        config: config.clone(),
        diversity: diversity_report(state.weights.view())?,
    };
    Ok((model, report))
}
