use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use xrm::dataset::SplitSpec;
use xrm::SolverConfig;
use xrm_cli::{run, Command, RunSpec};

#[derive(Parser)]
#[command(
    name = "xrm",
    version,
    about = "Exclusivity-regularized ensembles of linear SVMs"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Train on a whole data file and write model and report JSON.
    Train(Opts),
    /// Score a saved model, or retrain over random splits.
    Eval(Opts),
    /// Sweep λ and/or C over random splits and write CSV.
    Sweep(Opts),
    /// Time training at several training-set sizes and write CSV.
    Bench(Opts),
}

#[derive(Args)]
struct Opts {
    /// Sparse-text data file.
    #[arg(long)]
    data: PathBuf,
    /// Model JSON (written by train, read by eval).
    #[arg(long)]
    model: Option<PathBuf>,
    /// Output file: report JSON, evaluation JSON or CSV depending on the command.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    components: Option<usize>,
    /// Hinge loss power, p ≥ 1.
    #[arg(long)]
    p: Option<f64>,
    /// Penalty growth factor.
    #[arg(long)]
    rho: Option<f64>,
    /// Upper bound on the penalty parameter.
    #[arg(long)]
    mu_cap: Option<f64>,
    /// Stop when the objective changes by less than this.
    #[arg(long)]
    tol: Option<f64>,
    /// Stop only when both constraint residuals are below this.
    #[arg(long)]
    residual_tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Start from the high-accuracy solver preset.
    #[arg(long)]
    tight: bool,
    #[arg(long)]
    train_size: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Standardize features (fitted on training data only).
    #[arg(long)]
    standardize: bool,
    /// Write zero wall times so outputs are reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
    /// Sweep grid for λ.
    #[arg(long, value_delimiter = ',')]
    lambdas: Vec<f64>,
    /// Sweep grid for C.
    #[arg(long = "components-grid", value_delimiter = ',')]
    component_grid: Vec<usize>,
    /// Training-set sizes for bench.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Runs per size for bench.
    #[arg(long)]
    runs: Option<usize>,
}

fn resolve(command: Command, o: Opts) -> RunSpec {
    let mut config = if o.tight {
        SolverConfig::tight()
    } else {
        SolverConfig::default()
    };
    macro_rules! set {
        ($($field:ident <- $value:expr),*) => {$(if let Some(v) = $value { config.$field = v; })*};
    }
    set!(lambda <- o.lambda, components <- o.components, loss_power <- o.p, rho <- o.rho,
         mu_cap <- o.mu_cap, outer_tol <- o.tol, residual_tol <- o.residual_tol,
         outer_max_iters <- o.max_iters);

    let defaults = SplitSpec::default();
    let mut spec = RunSpec::new(command, o.data);
    spec.model_path = o.model;
    spec.output_path = o.out;
    spec.config = config;
    spec.split = SplitSpec {
        train_size: o.train_size.unwrap_or(defaults.train_size),
        seed: o.seed.unwrap_or(defaults.seed),
        trials: o.trials.unwrap_or(defaults.trials),
    };
    spec.lambdas = o.lambdas;
    spec.component_grid = o.component_grid;
    if !o.sizes.is_empty() {
        spec.bench_sizes = o.sizes;
    }
    if let Some(r) = o.runs {
        spec.bench_runs = r;
    }
    spec.standardize = o.standardize;
    spec.timing = !o.no_timing;
    spec
}

fn main() -> ExitCode {
    let spec = match Cli::parse().command {
        Sub::Train(o) => resolve(Command::Train, o),
        Sub::Eval(o) => resolve(Command::Eval, o),
        Sub::Sweep(o) => resolve(Command::Sweep, o),
        Sub::Bench(o) => resolve(Command::Bench, o),
    };
    ExitCode::from(run(&spec) as u8)
}
