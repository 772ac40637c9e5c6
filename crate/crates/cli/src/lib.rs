//! Command surface of the `xrm` binary. Each `cmd_*` function runs one
//! subcommand and returns the process exit code.

mod bench;
mod eval;
mod format;
mod sweep;
mod train;

use std::fmt;
use std::path::{Path, PathBuf};

use xrm::dataset::{read_sparse_file, SplitSpec};
use xrm::{DataSet, SolverConfig};

pub use bench::{bench_rows, cmd_bench, BenchRow};
pub use eval::{cmd_eval, run_trial, Evaluation, TrialOutcome, TrialSummary};
pub use format::sig6;
pub use sweep::{cmd_sweep, sweep_rows, SWEEP_HEADER};
pub use train::cmd_train;

/// Exit code for successful runs.
pub const EXIT_OK: i32 = 0;
/// Exit code for runtime failures: parse errors, solver divergence, bad dimensions.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for missing input files.
pub const EXIT_MISSING: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Train,
    Eval,
    Sweep,
    Bench,
}

/// Fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub data_path: PathBuf,
    pub model_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub config: SolverConfig,
    pub split: SplitSpec,
    /// Sweep grid; empty means the single value in `config`.
    pub lambdas: Vec<f64>,
    pub component_grid: Vec<usize>,
    pub bench_sizes: Vec<usize>,
    pub bench_runs: usize,
    pub standardize: bool,
    /// When false, wall times are written as zero so outputs are byte-stable.
    pub timing: bool,
}

impl RunSpec {
    pub fn new(command: Command, data_path: impl Into<PathBuf>) -> Self {
        Self {
            command,
            data_path: data_path.into(),
            model_path: None,
            output_path: None,
            config: SolverConfig::default(),
            split: SplitSpec::default(),
            lambdas: Vec::new(),
            component_grid: Vec::new(),
            bench_sizes: vec![100, 200, 400],
            bench_runs: 10,
            standardize: false,
            timing: true,
        }
    }

    pub(crate) fn wall(&self, seconds: f64) -> f64 {
        if self.timing {
            seconds
        } else {
            0.0
        }
    }
}

/// Dispatch on `spec.command`.
pub fn run(spec: &RunSpec) -> i32 {
    match spec.command {
        Command::Train => cmd_train(spec),
        Command::Eval => cmd_eval(spec),
        Command::Sweep => cmd_sweep(spec),
        Command::Bench => cmd_bench(spec),
    }
}

#[derive(Debug)]
pub(crate) struct MissingFile(pub PathBuf);

impl fmt::Display for MissingFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no such file: {}", self.0.display())
    }
}

impl std::error::Error for MissingFile {}

pub(crate) fn require_file(path: &Path) -> anyhow::Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(MissingFile(path.to_path_buf()).into())
    }
}

pub(crate) fn load_data(spec: &RunSpec) -> anyhow::Result<DataSet> {
    require_file(&spec.data_path)?;
    read_sparse_file(&spec.data_path)
        .map_err(|e| anyhow::anyhow!("{}: {e}", spec.data_path.display()))
}

pub(crate) fn exit_code(result: anyhow::Result<()>) -> i32 {
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<MissingFile>().is_some() {
                EXIT_MISSING
            } else {
                EXIT_FAILURE
            }
        }
    }
}

pub(crate) fn write_output(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display()))
}
