//! Command-line surface: compute bases, benchmark strategies, generate
//! distribution statistics, train, and evaluate. Exit codes: 0 success,
//! 1 usage error, 2 data error.

use crate::bench::{difficulty_grid, dimension_stats, rows_to_csv, run_benchmark, BenchmarkReport};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, PairUpdateMode, RunLimits, SelectionStrategy};
use crate::ideal_gen::{DistributionSpec, IdealFile};
use crate::learn::{
    evaluate, load_model, save_model, EpochReport, Trainer, TrainerConfig,
};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::io::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "buchberger-rl",
    about = "Groebner bases over F_p with learned and classical S-pair selection",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the reduced minimal Groebner basis of an ideal file.
    Gb(GbArgs),
    /// Run selection strategies over sampled ideals and report statistics.
    Benchmark(BenchmarkArgs),
    /// Distribution statistics: dimension histogram or difficulty grid.
    Stats(StatsArgs),
    /// Train a selection policy with PPO.
    Train(TrainArgs),
    /// Evaluate a trained model, optionally against all baselines.
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
struct GbArgs {
    /// Ideal file (JSON: {"n": ..., "generators": ["x0^2+x1", ...]}).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "degree")]
    strategy: String,
    /// Use the naive pair update instead of Gebauer-Moller.
    #[arg(long)]
    naive: bool,
    /// Step cap; unbounded when omitted.
    #[arg(long)]
    max_steps: Option<u64>,
    /// Seed for the Random strategy.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the basis + stats JSON here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Distribution, e.g. "3-20-10 weighted".
    #[arg(long)]
    spec: String,
    /// Comma-separated strategies, or "all".
    #[arg(long, default_value = "all")]
    strategies: String,
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Poisson rate for extra terms (non-binomial model).
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    naive: bool,
    /// Per-sample CSV sidecar path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    spec: String,
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    lambda: Option<f64>,
    /// Difficulty grid mode: mean additions per (d, s) cell.
    #[arg(long)]
    grid: bool,
    /// Grid degrees, comma-separated.
    #[arg(long, default_value = "5,10,15,20")]
    degrees: String,
    /// Grid generator counts, comma-separated.
    #[arg(long, default_value = "4,6,8,10")]
    generators: String,
}

#[derive(Args)]
struct TrainArgs {
    /// TOML or JSON config file mirroring the trainer field names.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Distribution override / shorthand, e.g. "3-20-10 weighted".
    #[arg(long)]
    spec: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epochs: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    value_kind: Option<String>,
    #[arg(long)]
    observation_mode: Option<String>,
    #[arg(long)]
    episodes_per_epoch: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    /// Resume from this checkpoint.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Epoch index to resume the log at.
    #[arg(long, default_value_t = 0)]
    start_epoch: u64,
    /// Final model path; checkpoints land next to it every 100 epochs.
    #[arg(long, default_value = "model.json")]
    output: PathBuf,
    /// JSONL epoch log; stdout when omitted.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Smoothing window (epochs) for the best-checkpoint summary.
    #[arg(long, default_value_t = 20)]
    smooth_window: usize,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    spec: String,
    #[arg(long, default_value_t = 1000)]
    episodes: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    lambda: Option<f64>,
    /// Also run every benchmark strategy on the same ideals.
    #[arg(long)]
    baselines: bool,
    /// Greedy (argmax) action selection instead of sampling.
    #[arg(long)]
    argmax: bool,
    /// Emit per-ideal log10(agent/best-baseline) ratios (needs --baselines).
    #[arg(long)]
    ratios: bool,
    #[arg(long, default_value_t = 500)]
    max_episode_length: u64,
    /// Per-episode CSV sidecar.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Parses arguments and dispatches; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version output is a success, not a usage error
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Gb(a) => cmd_gb(a),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Train(a) => cmd_train(a),
        Command::Evaluate(a) => cmd_evaluate(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn parse_spec(text: &str, lambda: Option<f64>) -> Result<DistributionSpec> {
    let spec: DistributionSpec = text.parse()?;
    match lambda {
        Some(l) => spec.with_lambda(l),
        None => Ok(spec),
    }
}

fn parse_strategies(text: &str) -> Result<Vec<SelectionStrategy>> {
    if text.eq_ignore_ascii_case("all") {
        return Ok(SelectionStrategy::ALL.to_vec());
    }
    text.split(',').map(|s| s.trim().parse()).collect()
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, content)?;
            Ok(())
        }
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct GbOutput {
    basis: Vec<String>,
    stats: crate::groebner::RunStats,
}

fn cmd_gb(args: GbArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.input)?;
    let file: IdealFile =
        serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!(
            "{}: {e}",
            args.input.display()
        )))?;
    let (generators, field) = file.parse_generators()?;
    let strategy: SelectionStrategy = args.strategy.parse()?;
    let mode = if args.naive {
        PairUpdateMode::Naive
    } else {
        PairUpdateMode::GebauerMoller
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (basis, stats) = buchberger(
        &generators,
        field,
        strategy,
        mode,
        &mut rng,
        RunLimits {
            max_steps: args.max_steps,
        },
    )?;
    let out = GbOutput {
        basis: basis.iter().map(|p| p.to_string()).collect(),
        stats,
    };
    write_or_print(&args.output, &serde_json::to_string_pretty(&out)?)
}

fn cmd_benchmark(args: BenchmarkArgs) -> Result<()> {
    let spec = parse_spec(&args.spec, args.lambda)?;
    let strategies = parse_strategies(&args.strategies)?;
    let mode = if args.naive {
        PairUpdateMode::Naive
    } else {
        PairUpdateMode::GebauerMoller
    };
    let (rows, reports) = run_benchmark(&spec, &strategies, args.samples, args.seed, mode)?;
    if let Some(path) = &args.csv {
        std::fs::write(path, rows_to_csv(&rows))?;
    }
    println!("{}", serde_json::to_string_pretty(&reports)?);
    Ok(())
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad {what} entry '{s}'")))
        })
        .collect()
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let spec = parse_spec(&args.spec, args.lambda)?;
    if args.grid {
        let degrees: Vec<u32> = parse_list(&args.degrees, "degree")?;
        let generators: Vec<usize> = parse_list(&args.generators, "generator count")?;
        let cells = difficulty_grid(&spec, &degrees, &generators, args.samples, args.seed)?;
        println!("{}", serde_json::to_string_pretty(&cells)?);
    } else {
        let stats = dimension_stats(&spec, args.samples, args.seed)?;
        println!("{}", serde_json::to_string_pretty(&stats)?);
    }
    Ok(())
}

fn config_from_file(path: &Path) -> Result<TrainerConfig> {
    let text = std::fs::read_to_string(path)?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&text)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }
}

fn checkpoint_path(output: &Path, epoch: u64) -> PathBuf {
    let stem = output
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("model");
    output.with_file_name(format!("{stem}-epoch{epoch}.json"))
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let mut config = match (&args.config, &args.spec) {
        (Some(path), _) => config_from_file(path)?,
        (None, Some(spec)) => TrainerConfig::new(vec![parse_spec(spec, args.lambda)?]),
        (None, None) => {
            return Err(Error::InvalidArgument(
                "train needs --config or --spec".into(),
            ))
        }
    };
    if args.config.is_some() {
        if let Some(spec) = &args.spec {
            config.distributions = vec![parse_spec(spec, args.lambda)?];
        }
    }
    if let Some(v) = args.epochs {
        config.epochs = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = &args.value_kind {
        config.value_kind = v.parse()?;
    }
    if let Some(v) = &args.observation_mode {
        config.observation_mode = v.parse()?;
    }
    if let Some(v) = args.episodes_per_epoch {
        config.episodes_per_epoch = v;
    }
    if let Some(v) = args.learning_rate {
        config.learning_rate = v;
    }

    let mut trainer = match &args.resume {
        Some(path) => Trainer::from_model(config.clone(), &load_model(path)?, args.start_epoch)?,
        None => Trainer::new(config.clone())?,
    };

    let mut log: Box<dyn std::io::Write> = match &args.log {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout()),
    };
    let mut reports: Vec<EpochReport> = vec![];
    for _ in 0..config.epochs {
        let report = trainer.train_epoch()?;
        writeln!(log, "{}", serde_json::to_string(&report)?)?;
        log.flush()?;
        if trainer.epoch() % 100 == 0 {
            save_model(&checkpoint_path(&args.output, trainer.epoch()), &trainer.model_file())?;
        }
        reports.push(report);
    }
    save_model(&args.output, &trainer.model_file())?;

    if !reports.is_empty() {
        let summary = training_summary(&reports, args.smooth_window);
        eprintln!("{}", serde_json::to_string(&summary)?);
    }
    Ok(())
}

#[derive(Serialize)]
struct TrainingSummary {
    epochs: usize,
    final_mean_additions: f64,
    best_smoothed_epoch: u64,
    best_smoothed_mean: f64,
    smooth_window: usize,
}

/// Trailing-window smoothed training curve; reports the epoch whose
/// window mean is lowest.
fn training_summary(reports: &[EpochReport], window: usize) -> TrainingSummary {
    let w = window.max(1);
    let mut best = (reports[0].epoch, f64::INFINITY);
    for i in 0..reports.len() {
        let lo = (i + 1).saturating_sub(w);
        let slice = &reports[lo..=i];
        let mean = slice.iter().map(|r| r.mean_additions).sum::<f64>() / slice.len() as f64;
        if mean < best.1 {
            best = (reports[i].epoch, mean);
        }
    }
    TrainingSummary {
        epochs: reports.len(),
        final_mean_additions: reports.last().unwrap().mean_additions,
        best_smoothed_epoch: best.0,
        best_smoothed_mean: best.1,
        smooth_window: w,
    }
}

#[derive(Serialize)]
struct ComparisonRow {
    name: String,
    mean_additions: f64,
    std_additions: f64,
}

#[derive(Serialize)]
struct Comparison {
    spec: String,
    episodes: u64,
    agent: ComparisonRow,
    baselines: Vec<ComparisonRow>,
    /// 1 - agent_mean / best_baseline_mean; absent without --baselines.
    #[serde(skip_serializing_if = "Option::is_none")]
    improvement: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_baseline: Option<String>,
    /// Per-ideal log10(agent / best-baseline-strategy) ratios.
    #[serde(skip_serializing_if = "Option::is_none")]
    log10_ratios: Option<Vec<f64>>,
    truncated_episodes: usize,
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let spec = parse_spec(&args.spec, args.lambda)?;
    let model = load_model(&args.model)?;
    let params = model.params_for(spec.n, model.observation_mode)?;
    let report = evaluate(
        &params,
        &spec,
        model.observation_mode,
        args.episodes,
        args.seed,
        !args.argmax,
        args.max_episode_length,
    )?;

    let mut comparison = Comparison {
        spec: spec.to_string(),
        episodes: args.episodes,
        agent: ComparisonRow {
            name: "agent".into(),
            mean_additions: report.mean_additions,
            std_additions: report.std_additions,
        },
        baselines: vec![],
        improvement: None,
        best_baseline: None,
        log10_ratios: None,
        truncated_episodes: report.truncated_episodes,
    };

    if args.baselines {
        let (rows, baseline_reports) = run_benchmark(
            &spec,
            &SelectionStrategy::ALL,
            args.episodes,
            args.seed,
            PairUpdateMode::GebauerMoller,
        )?;
        let best = baseline_reports
            .iter()
            .min_by(|a, b| a.mean_additions.total_cmp(&b.mean_additions))
            .expect("at least one baseline");
        comparison.improvement = Some(1.0 - report.mean_additions / best.mean_additions);
        comparison.best_baseline = Some(best.strategy.clone());
        if args.ratios {
            let best_counts: Vec<u64> = rows
                .iter()
                .filter(|r| r.strategy == best.strategy)
                .map(|r| r.additions)
                .collect();
            comparison.log10_ratios = Some(
                report
                    .counts
                    .iter()
                    .zip(&best_counts)
                    .map(|(&a, &b)| (a as f64 / b as f64).log10())
                    .collect(),
            );
        }
        comparison.baselines = baseline_reports
            .iter()
            .map(|r| ComparisonRow {
                name: r.strategy.clone(),
                mean_additions: r.mean_additions,
                std_additions: r.std_additions,
            })
            .collect();
        if let Some(path) = &args.csv {
            std::fs::write(path, eval_csv(&report.counts, &baseline_reports))?;
        }
    } else if let Some(path) = &args.csv {
        std::fs::write(path, eval_csv(&report.counts, &[]))?;
    }

    println!("{}", serde_json::to_string_pretty(&comparison)?);
    Ok(())
}

fn eval_csv(agent_counts: &[u64], baselines: &[BenchmarkReport]) -> String {
    let mut header = String::from("seed_index,agent");
    for b in baselines {
        header.push(',');
        header.push_str(&b.strategy);
    }
    header.push('\n');
    let mut out = header;
    for (i, &c) in agent_counts.iter().enumerate() {
        out.push_str(&i.to_string());
        out.push(',');
        out.push_str(&c.to_string());
        for b in baselines {
            out.push(',');
            out.push_str(&b.counts[i].to_string());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_list_parsing() {
        assert_eq!(parse_strategies("all").unwrap().len(), 6);
        let two = parse_strategies("degree, sugar").unwrap();
        assert_eq!(two, vec![SelectionStrategy::Degree, SelectionStrategy::Sugar]);
        assert!(parse_strategies("degreee").is_err());
    }

    #[test]
    fn checkpoint_names() {
        assert_eq!(
            checkpoint_path(Path::new("out/model.json"), 200),
            Path::new("out/model-epoch200.json")
        );
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["buchberger-rl", "frobnicate"]), 1);
        assert_eq!(run(["buchberger-rl", "benchmark"]), 1); // missing --spec
        assert_eq!(run(["buchberger-rl", "--help"]), 0);
    }

    #[test]
    fn data_errors_exit_two() {
        assert_eq!(
            run(["buchberger-rl", "gb", "--input", "/nonexistent/ideal.json"]),
            2
        );
        assert_eq!(
            run([
                "buchberger-rl",
                "benchmark",
                "--spec",
                "not-a-spec",
                "--samples",
                "1"
            ]),
            2
        );
    }

    #[test]
    fn smoothed_summary_tracks_minimum() {
        let mk = |epoch, mean| EpochReport {
            epoch,
            mean_additions: mean,
            std_additions: 0.0,
            updates: 0,
            kl: 0.0,
            wall_seconds: 0.0,
        };
        let reports = vec![mk(0, 100.0), mk(1, 50.0), mk(2, 80.0)];
        let s = training_summary(&reports, 1);
        assert_eq!(s.best_smoothed_epoch, 1);
        assert_eq!(s.best_smoothed_mean, 50.0);
        let s = training_summary(&reports, 2);
        assert_eq!(s.best_smoothed_epoch, 2);
        assert_eq!(s.best_smoothed_mean, 65.0);
    }
}
