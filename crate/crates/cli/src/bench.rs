use std::time::Instant;

use anyhow::bail;
use xrm::dataset::{split, SplitSpec};
use xrm::{train, DataSet};

use crate::format::sig6;
use crate::{exit_code, load_data, write_output, RunSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub n_train: usize,
    pub runs: usize,
    pub total_seconds: f64,
}

/// Total training time over `bench_runs` runs for each requested size. Run
/// `r` trains on the subsample drawn by split trial `r`; runs are sequential.
pub fn bench_rows(spec: &RunSpec, data: &DataSet) -> anyhow::Result<Vec<BenchRow>> {
    let n = data.instance_count();
    if spec.bench_runs == 0 {
        bail!("bench needs at least one run");
    }
    if let Some(&too_big) = spec.bench_sizes.iter().find(|&&s| s > n || s == 0) {
        bail!("bench size {too_big} outside 1..={n} instances");
    }
    let mut rows = Vec::with_capacity(spec.bench_sizes.len());
    for &size in &spec.bench_sizes {
        let mut total = 0.0;
        for run in 0..spec.bench_runs {
            let sample = if size == n {
                data.clone()
            } else {
                let s = SplitSpec {
                    train_size: size,
                    seed: spec.split.seed,
                    trials: spec.bench_runs,
                };
                split(data, &s, run)?.0
            };
            let start = Instant::now();
            train(&sample, &spec.config)?;
            total += start.elapsed().as_secs_f64();
        }
        rows.push(BenchRow {
            n_train: size,
            runs: spec.bench_runs,
            total_seconds: spec.wall(total),
        });
    }
    Ok(rows)
}

/// Timing benchmark written as CSV `n_train,runs,total_seconds`.
pub fn cmd_bench(spec: &RunSpec) -> i32 {
    exit_code(run(spec))
}

fn run(spec: &RunSpec) -> anyhow::Result<()> {
    let data = load_data(spec)?;
    let rows = bench_rows(spec, &data)?;
    let mut csv = String::from("n_train,runs,total_seconds\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{}\n",
            r.n_train,
            r.runs,
            sig6(r.total_seconds)
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
