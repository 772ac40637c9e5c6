use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use xrm::dataset::{split, SplitSpec, Standardizer};
use xrm::{train, DataSet, ModelFile, SolverConfig};

use crate::{exit_code, load_data, require_file, write_output, RunSpec};

/// One retraining on one random split. Errors are percentages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub lambda: f64,
    pub components: usize,
    pub trial: usize,
    pub train_error: f64,
    pub test_error: f64,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub config: SolverConfig,
    pub split: SplitSpec,
    pub standardize: bool,
    pub trials: Vec<TrialOutcome>,
    pub mean_test_error: f64,
    /// Sample standard deviation (n − 1 denominator); zero for one trial.
    pub std_test_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Evaluation {
    Model { instances: usize, test_error: f64 },
    Trials(TrialSummary),
}

/// Split, optionally standardize on the training part, train, score both parts.
pub fn run_trial(
    data: &DataSet,
    config: &SolverConfig,
    spec: &SplitSpec,
    trial: usize,
    standardize: bool,
) -> xrm::Result<TrialOutcome> {
    let (mut train_part, mut test_part) = split(data, spec, trial)?;
    if standardize {
        let s = Standardizer::fit(&train_part);
        train_part = s.apply(&train_part)?;
        test_part = s.apply(&test_part)?;
    }
    let start = Instant::now();
    let (model, report) = train(&train_part, config)?;
    let wall_time = start.elapsed().as_secs_f64();
    Ok(TrialOutcome {
        lambda: config.lambda,
        components: config.components,
        trial,
        train_error: 100.0 * model.test_error(&train_part)?,
        test_error: 100.0 * model.test_error(&test_part)?,
        iterations: report.iterations,
        converged: report.converged,
        wall_time,
    })
}

/// With `--model`, score that model on the data file. Otherwise retrain over
/// `trials` random splits and report mean ± standard deviation of test error.
pub fn cmd_eval(spec: &RunSpec) -> i32 {
    exit_code(run(spec))
}

fn run(spec: &RunSpec) -> anyhow::Result<()> {
    let data = load_data(spec)?;
    let evaluation = match &spec.model_path {
        Some(path) => {
            require_file(path)?;
            let file = ModelFile::load(path).with_context(|| path.display().to_string())?;
            let model = file.to_model()?;
            let data = match &file.standardizer {
                Some(s) => s.apply(&data)?,
                None => data,
            };
            let test_error = 100.0 * model.test_error(&data)?;
            println!("test error {test_error:.2}%");
            Evaluation::Model {
                instances: data.instance_count(),
                test_error,
            }
        }
        None => {
            let summary = summarize(spec, &data)?;
            println!(
                "test error {:.2} ± {:.2}% over {} trials",
                summary.mean_test_error,
                summary.std_test_error,
                summary.trials.len()
            );
            Evaluation::Trials(summary)
        }
    };
    if let Some(out) = &spec.output_path {
        write_output(out, &serde_json::to_string_pretty(&evaluation)?)?;
    }
    Ok(())
}

fn summarize(spec: &RunSpec, data: &DataSet) -> anyhow::Result<TrialSummary> {
    let trials = (0..spec.split.trials)
        .into_par_iter()
        .map(|t| {
            run_trial(data, &spec.config, &spec.split, t, spec.standardize).map(|mut o| {
                o.wall_time = spec.wall(o.wall_time);
                o
            })
        })
        .collect::<xrm::Result<Vec<_>>>()?;
    let errors: Vec<f64> = trials.iter().map(|t| t.test_error).collect();
    let (mean, std) = mean_and_sample_std(&errors);
    Ok(TrialSummary {
        config: spec.config.clone(),
        split: spec.split,
        standardize: spec.standardize,
        trials,
        mean_test_error: mean,
        std_test_error: std,
    })
}

pub(crate) fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
