use rayon::prelude::*;
use xrm::{DataSet, SolverConfig};

use crate::format::sig6;
use crate::{exit_code, load_data, run_trial, write_output, RunSpec, TrialOutcome};

pub const SWEEP_HEADER: &str =
    "lambda,components,trial,train_error,test_error,iterations,wall_time";

/// One row per (λ, C, trial), ordered by λ, then C, then trial.
pub fn sweep_rows(spec: &RunSpec, data: &DataSet) -> xrm::Result<Vec<TrialOutcome>> {
    let lambdas = if spec.lambdas.is_empty() {
        vec![spec.config.lambda]
    } else {
        spec.lambdas.clone()
    };
    let components = if spec.component_grid.is_empty() {
        vec![spec.config.components]
    } else {
        spec.component_grid.clone()
    };
    let mut jobs = Vec::new();
    for &lambda in &lambdas {
        for &c in &components {
            for trial in 0..spec.split.trials {
                let config = SolverConfig {
                    lambda,
                    components: c,
                    ..spec.config.clone()
                };
                jobs.push((config, trial));
            }
        }
    }
    jobs.par_iter()
        .map(|(config, trial)| {
            run_trial(data, config, &spec.split, *trial, spec.standardize).map(|mut o| {
                o.wall_time = spec.wall(o.wall_time);
                o
            })
        })
        .collect()
}

/// Grid sweep written as CSV (`--out`, else stdout). Errors are percentages.
pub fn cmd_sweep(spec: &RunSpec) -> i32 {
    exit_code(run(spec))
}

fn run(spec: &RunSpec) -> anyhow::Result<()> {
    let data = load_data(spec)?;
    let rows = sweep_rows(spec, &data)?;
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            sig6(r.lambda),
            r.components,
            r.trial,
            sig6(r.train_error),
            sig6(r.test_error),
            r.iterations,
            sig6(r.wall_time)
        ));
    }
    match &spec.output_path {
        Some(out) => write_output(out, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
