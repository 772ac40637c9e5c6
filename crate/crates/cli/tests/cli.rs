use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command as Process, Output};

use tempfile::TempDir;
use xrm::dataset::synthetic::gaussian_classes;
use xrm::dataset::write_sparse_text;
use xrm::oracle::{reference_primal_solver, OracleConfig};
use xrm::{DataSet, ModelFile, SolverConfig, TrainReport};
use xrm_cli::{
    bench_rows, cmd_eval, cmd_sweep, cmd_train, sweep_rows, Command, Evaluation, RunSpec,
    EXIT_MISSING, EXIT_OK, SWEEP_HEADER,
};

fn write_data(dir: &Path, name: &str, data: &DataSet) -> PathBuf {
    let path = dir.join(name);
    write_sparse_text(data, fs::File::create(&path).unwrap()).unwrap();
    path
}

fn xrm(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_xrm"))
        .args(args)
        .output()
        .unwrap()
}

fn sonar() -> Option<PathBuf> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/sonar");
    path.is_file().then_some(path)
}

#[test]
fn train_writes_model_and_report() {
    let dir = TempDir::new().unwrap();
    let data = write_data(dir.path(), "d.txt", &gaussian_classes(60, 5, 2.0, 1));
    let model = dir.path().join("m.json");
    let mut spec = RunSpec::new(Command::Train, &data);
    spec.model_path = Some(model.clone());
    assert_eq!(cmd_train(&spec), EXIT_OK);

    let file = ModelFile::load(&model).unwrap();
    assert_eq!(file.format, "xrm-model/1");
    assert_eq!((file.features, file.components), (5, 10));
    let report: TrainReport =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.report.json")).unwrap())
            .unwrap();
    assert_eq!(report.config, SolverConfig::default());
    assert!(report.converged);
}

#[test]
fn missing_file_exits_with_two_and_names_path() {
    let out = xrm(&["train", "--data", "/definitely/not/here.txt"]);
    assert_eq!(out.status.code(), Some(EXIT_MISSING));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/definitely/not/here.txt"));

    let dir = TempDir::new().unwrap();
    let data = write_data(dir.path(), "d.txt", &gaussian_classes(10, 2, 2.0, 1));
    let out = xrm(&[
        "eval",
        "--data",
        data.to_str().unwrap(),
        "--model",
        "/no/model.json",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_MISSING));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/no/model.json"));
}

#[test]
fn parse_error_is_a_failure() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "+1 1:0.5\n-1 2:x\n").unwrap();
    let out = xrm(&[
        "train",
        "--data",
        path.to_str().unwrap(),
        "--model",
        "/tmp/unused.json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn single_component_training_matches_l2_svm_optimum() {
    let dir = TempDir::new().unwrap();
    let d = gaussian_classes(30, 4, 1.5, 11);
    let data = write_data(dir.path(), "d.txt", &d);
    let model = dir.path().join("m.json");
    let report = dir.path().join("r.json");
    let out = xrm(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
        "--components",
        "1",
        "--tight",
    ]);
    assert!(out.status.success());
    let report: TrainReport = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    let oracle = reference_primal_solver(
        &d,
        2.0,
        1,
        2.0,
        &OracleConfig {
            max_iters: 100_000,
            ..Default::default()
        },
    );
    let rel = (report.final_objective() - oracle.objective).abs() / oracle.objective;
    assert!(rel < 1e-3, "{rel}");
}

#[test]
fn perfect_model_scores_zero_and_wrong_dimension_fails() {
    let dir = TempDir::new().unwrap();
    let d = gaussian_classes(40, 3, 8.0, 2);
    let data = write_data(dir.path(), "d.txt", &d);
    let model = dir.path().join("m.json");
    let mut spec = RunSpec::new(Command::Train, &data);
    spec.model_path = Some(model.clone());
    spec.standardize = true;
    assert_eq!(cmd_train(&spec), EXIT_OK);

    let result = dir.path().join("eval.json");
    let mut eval = RunSpec::new(Command::Eval, &data);
    eval.model_path = Some(model.clone());
    eval.output_path = Some(result.clone());
    assert_eq!(cmd_eval(&eval), EXIT_OK);
    let parsed: Evaluation = serde_json::from_str(&fs::read_to_string(&result).unwrap()).unwrap();
    assert_eq!(
        parsed,
        Evaluation::Model {
            instances: 40,
            test_error: 0.0
        }
    );

    let other = write_data(dir.path(), "o.txt", &gaussian_classes(10, 7, 1.0, 3));
    let out = xrm(&[
        "eval",
        "--data",
        other.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("expected 3, found 7"), "{err}");
}

#[test]
fn trial_evaluation_reports_mean_and_spread() {
    let dir = TempDir::new().unwrap();
    let data = write_data(dir.path(), "d.txt", &gaussian_classes(80, 6, 1.0, 4));
    let result = dir.path().join("eval.json");
    let mut spec = RunSpec::new(Command::Eval, &data);
    spec.split.train_size = 40;
    spec.split.trials = 4;
    spec.output_path = Some(result.clone());
    assert_eq!(cmd_eval(&spec), EXIT_OK);
    let Evaluation::Trials(summary) =
        serde_json::from_str(&fs::read_to_string(&result).unwrap()).unwrap()
    else {
        panic!("expected a trial summary");
    };
    assert_eq!(summary.trials.len(), 4);
    let mean = summary.trials.iter().map(|t| t.test_error).sum::<f64>() / 4.0;
    assert!((mean - summary.mean_test_error).abs() < 1e-12);
    assert!(summary.std_test_error >= 0.0);
    assert_eq!(summary.config, SolverConfig::default());
}

#[test]
fn sweep_writes_one_row_per_grid_point_and_trial() {
    let dir = TempDir::new().unwrap();
    let data = write_data(dir.path(), "d.txt", &gaussian_classes(60, 4, 1.0, 5));
    let csv = dir.path().join("s.csv");
    let mut spec = RunSpec::new(Command::Sweep, &data);
    spec.lambdas = vec![0.05, 0.5, 2.0, 4.0];
    spec.split.train_size = 30;
    spec.split.trials = 3;
    spec.output_path = Some(csv.clone());
    spec.timing = false;
    assert_eq!(cmd_sweep(&spec), EXIT_OK);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], SWEEP_HEADER);
    assert_eq!(lines.len(), 1 + 4 * 3);
    assert!(lines[1].starts_with("0.05,10,0,"));
    assert!(lines[12].starts_with("4,10,2,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",0")));
}

#[test]
fn outputs_are_byte_identical_without_timing() {
    let dir = TempDir::new().unwrap();
    let data = write_data(dir.path(), "d.txt", &gaussian_classes(50, 4, 1.0, 6));
    let d = data.to_str().unwrap();
    let run = |tag: &str| {
        let m = dir.path().join(format!("m{tag}.json"));
        let r = dir.path().join(format!("r{tag}.json"));
        let s = dir.path().join(format!("s{tag}.csv"));
        let e = dir.path().join(format!("e{tag}.json"));
        let ok = |o: Output| assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        ok(xrm(&[
            "train",
            "--data",
            d,
            "--model",
            m.to_str().unwrap(),
            "--out",
            r.to_str().unwrap(),
            "--no-timing",
        ]));
        ok(xrm(&[
            "sweep",
            "--data",
            d,
            "--train-size",
            "25",
            "--trials",
            "3",
            "--lambdas",
            "1,2",
            "--out",
            s.to_str().unwrap(),
            "--no-timing",
        ]));
        ok(xrm(&[
            "eval",
            "--data",
            d,
            "--train-size",
            "25",
            "--trials",
            "3",
            "--out",
            e.to_str().unwrap(),
            "--no-timing",
        ]));
        [m, r, s, e].map(|p| fs::read(p).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn larger_lambda_lowers_training_error() {
    let Some(path) = sonar() else { return };
    let data = xrm::dataset::read_sparse_file(&path).unwrap();
    let mut spec = RunSpec::new(Command::Sweep, &path);
    spec.lambdas = vec![0.05, 4.0];
    let rows = sweep_rows(&spec, &data).unwrap();
    let mean = |lambda: f64| {
        let r: Vec<f64> = rows
            .iter()
            .filter(|r| r.lambda == lambda)
            .map(|r| r.train_error)
            .collect();
        r.iter().sum::<f64>() / r.len() as f64
    };
    assert!(mean(4.0) <= mean(0.05), "{} vs {}", mean(4.0), mean(0.05));
}

#[test]
fn fewer_components_fit_training_data_better() {
    let Some(path) = sonar() else { return };
    let data = xrm::dataset::read_sparse_file(&path).unwrap();
    let mut spec = RunSpec::new(Command::Sweep, &path);
    spec.component_grid = vec![5, 10, 30];
    let rows = sweep_rows(&spec, &data).unwrap();
    let mean: Vec<f64> = [5, 10, 30]
        .iter()
        .map(|&c| {
            let r: Vec<f64> = rows
                .iter()
                .filter(|r| r.components == c)
                .map(|r| r.train_error)
                .collect();
            r.iter().sum::<f64>() / r.len() as f64
        })
        .collect();
    assert!(mean.windows(2).all(|w| w[0] <= w[1]), "{mean:?}");
}

#[test]
fn bench_reports_positive_totals_and_rejects_oversized_requests() {
    let dir = TempDir::new().unwrap();
    let d = gaussian_classes(450, 5, 1.0, 8);
    let data = write_data(dir.path(), "d.txt", &d);
    let mut spec = RunSpec::new(Command::Bench, &data);
    spec.bench_runs = 2;
    let rows = bench_rows(&spec, &d).unwrap();
    assert_eq!(
        rows.iter().map(|r| r.n_train).collect::<Vec<_>>(),
        vec![100, 200, 400]
    );
    assert!(rows.iter().all(|r| r.total_seconds > 0.0 && r.runs == 2));

    let out = xrm(&[
        "bench",
        "--data",
        data.to_str().unwrap(),
        "--sizes",
        "100,451",
        "--runs",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("451"));

    let csv = dir.path().join("b.csv");
    let out = xrm(&[
        "bench",
        "--data",
        data.to_str().unwrap(),
        "--sizes",
        "50,100",
        "--runs",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().next(), Some("n_train,runs,total_seconds"));
    assert_eq!(text.lines().count(), 3);
}
