use std::path::PathBuf;

use xrm::dataset::Standardizer;
use xrm::{train, ModelFile};

use crate::{exit_code, load_data, write_output, RunSpec};

const DEFAULT_MODEL: &str = "model.json";

/// Train on the whole file. Writes the model JSON and a report JSON
/// (default: next to the model as `<stem>.report.json`).
pub fn cmd_train(spec: &RunSpec) -> i32 {
    exit_code(run(spec))
}

fn run(spec: &RunSpec) -> anyhow::Result<()> {
    let mut data = load_data(spec)?;
    let standardizer = spec.standardize.then(|| Standardizer::fit(&data));
    if let Some(s) = &standardizer {
        data = s.apply(&data)?;
    }
    let (model, mut report) = train(&data, &spec.config)?;
    report.wall_time = spec.wall(report.wall_time);

    let model_path = spec
        .model_path
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_MODEL));
    let report_path = spec
        .output_path
        .clone()
        .unwrap_or_else(|| model_path.with_extension("report.json"));

    let file = ModelFile::new(&model, standardizer);
    write_output(&model_path, &file.to_json()?)?;
    write_output(&report_path, &serde_json::to_string_pretty(&report)?)?;

    println!("objective  {}", report.final_objective());
    println!(
        "iterations {}{}",
        report.iterations,
        if report.converged {
            ""
        } else {
            " (not converged)"
        }
    );
    if spec.timing {
        println!("wall time  {:.3}s", report.wall_time);
    }
    println!("model      {}", model_path.display());
    println!("report     {}", report_path.display());
    Ok(())
}
