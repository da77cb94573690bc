//! End-to-end tests for the `buchberger-rl` binary: exit codes, output
//! formats, and cross-invocation determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_buchberger-rl"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("buchberger-rl-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

#[test]
fn gb_computes_known_basis() {
    let dir = tmpdir("gb");
    let input = dir.join("ideal.json");
    write(
        &input,
        r#"{"n": 3, "generators": ["x0^2 + x1*x2", "x0*x1 + x2^2"]}"#,
    );
    let out = run(&["gb", "--input", input.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let basis: Vec<&str> = json["basis"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    // hand computation: S(f1,f2) = x1^2*x2 - x0*x2^2, already reduced
    assert_eq!(
        basis,
        vec!["x0^2+x1*x2", "x0*x1+x2^2", "x1^2*x2+32002*x0*x2^2"]
    );
    assert_eq!(json["stats"]["additions"].as_u64(), Some(3));
    assert_eq!(json["stats"]["dimension"].as_i64(), Some(1));

    // every strategy yields the same reduced basis through the CLI
    for strategy in ["first", "normal", "sugar", "random", "truedegree"] {
        let other = run(&["gb", "--input", input.to_str().unwrap(), "--strategy", strategy]);
        assert!(other.status.success());
        let j: serde_json::Value = serde_json::from_slice(&other.stdout).unwrap();
        assert_eq!(j["basis"], json["basis"], "strategy {strategy}");
    }
}

#[test]
fn gb_output_flag_writes_file() {
    let dir = tmpdir("gb-out");
    let input = dir.join("ideal.json");
    write(&input, r#"{"n": 2, "generators": ["x0^2 - x1", "x0*x1 - x0"]}"#);
    let output = dir.join("basis.json");
    let out = run(&[
        "gb",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&output).unwrap()).unwrap();
    assert!(json["basis"].as_array().unwrap().len() >= 2);
}

#[test]
fn exit_codes() {
    // usage errors -> 1
    assert_eq!(run(&["gb"]).status.code(), Some(1)); // missing --input
    assert_eq!(run(&["no-such-subcommand"]).status.code(), Some(1));
    assert_eq!(run(&["benchmark", "--spec", "3-20-10 weighted", "--bogus"]).status.code(), Some(1));
    // help/version -> 0
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["gb", "--help"]).status.code(), Some(0));
    // data errors -> 2
    assert_eq!(run(&["gb", "--input", "/nonexistent/ideal.json"]).status.code(), Some(2));
    let dir = tmpdir("exit");
    let bad = dir.join("bad.json");
    write(&bad, "{ not json");
    assert_eq!(run(&["gb", "--input", bad.to_str().unwrap()]).status.code(), Some(2));
    let bad_poly = dir.join("badpoly.json");
    write(&bad_poly, r#"{"n": 2, "generators": ["x0^2 + x5"]}"#);
    assert_eq!(run(&["gb", "--input", bad_poly.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["benchmark", "--spec", "not-a-spec"]).status.code(), Some(2));
}

#[test]
fn benchmark_csv_is_seed_deterministic() {
    let dir = tmpdir("bench");
    let csv_a = dir.join("a.csv");
    let csv_b = dir.join("b.csv");
    let args = |csv: &Path| {
        vec![
            "benchmark".to_string(),
            "--spec".into(),
            "3-5-5 weighted".into(),
            "--samples".into(),
            "50".into(),
            "--seed".into(),
            "9".into(),
            "--csv".into(),
            csv.to_str().unwrap().into(),
        ]
    };
    let a = bin().args(args(&csv_a)).output().unwrap();
    let b = bin().args(args(&csv_b)).output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout, "summary JSON differs between identical runs");
    assert_eq!(
        std::fs::read(&csv_a).unwrap(),
        std::fs::read(&csv_b).unwrap(),
        "per-sample CSV differs between identical runs"
    );
    let text = std::fs::read_to_string(&csv_a).unwrap();
    assert!(text.lines().next().unwrap().contains("strategy"));
    assert_eq!(text.lines().count(), 1 + 6 * 50); // header + 6 strategies x 50 samples
}

#[test]
fn stats_reports_histogram() {
    let out = run(&["stats", "--spec", "3-10-5 weighted", "--samples", "100"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts = json["dimension_counts"].as_object().unwrap();
    let total: u64 = counts.values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, 100);
}

#[test]
fn train_writes_model_and_log_and_resumes() {
    let dir = tmpdir("train");
    let config = dir.join("config.toml");
    write(
        &config,
        "distributions = [\"2-5-5 weighted\"]\nvalue_kind = \"pairs_left\"\nepisodes_per_epoch = 5\nmax_updates_per_epoch = 3\nepochs = 2\nseed = 4\n",
    );
    let model = dir.join("model.json");
    let log = dir.join("log.jsonl");
    let out = run(&[
        "train",
        "--config",
        config.to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let model_json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&model).unwrap()).unwrap();
    assert_eq!(model_json["format_version"], 1);
    assert_eq!(model_json["n"], 2);
    let epochs: Vec<serde_json::Value> = std::fs::read_to_string(&log)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(epochs.len(), 2);
    assert_eq!(epochs[0]["epoch"], 0);
    assert_eq!(epochs[1]["epoch"], 1);
    let summary: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(summary["epochs"], 2);

    // resume: epochs continue from --start-epoch
    let model2 = dir.join("model2.json");
    let log2 = dir.join("log2.jsonl");
    let out2 = run(&[
        "train",
        "--config",
        config.to_str().unwrap(),
        "--resume",
        model.to_str().unwrap(),
        "--start-epoch",
        "2",
        "--output",
        model2.to_str().unwrap(),
        "--log",
        log2.to_str().unwrap(),
    ]);
    assert!(out2.status.success(), "stderr: {}", String::from_utf8_lossy(&out2.stderr));
    let resumed: Vec<serde_json::Value> = std::fs::read_to_string(&log2)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(resumed[0]["epoch"], 2);
    assert_eq!(resumed[1]["epoch"], 3);
}

#[test]
fn evaluate_compares_against_baselines() {
    let dir = tmpdir("eval");
    let config = dir.join("config.toml");
    write(
        &config,
        "distributions = [\"2-5-5 weighted\"]\nvalue_kind = \"pairs_left\"\nepisodes_per_epoch = 5\nmax_updates_per_epoch = 3\nepochs = 1\n",
    );
    let model = dir.join("model.json");
    let trained = run(&[
        "train",
        "--config",
        config.to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
        "--log",
        dir.join("log.jsonl").to_str().unwrap(),
    ]);
    assert!(trained.status.success());
    let out = run(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--spec",
        "2-5-5 weighted",
        "--episodes",
        "30",
        "--baselines",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["agent"]["mean_additions"].as_f64().unwrap() > 0.0);
    assert_eq!(json["baselines"].as_array().unwrap().len(), 6);
    assert!(json["improvement"].is_number());
    assert!(json["best_baseline"].is_string());

    // model/spec variable-count mismatch is a data error
    let mismatch = run(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--spec",
        "3-5-5 weighted",
        "--episodes",
        "5",
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
}
