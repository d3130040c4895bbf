//! Benchmark CLI: configure experiments, run sweeps over arm counts,
//! export results, and render regret charts.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use duelbench::error::Error;
use duelbench::experiment::{
    run_experiment, sweep_summary, write_results_csv, write_summary_json, ExecMode,
    ExperimentConfig, PolicySpec, PolicySummary, SweepSummary,
};
use duelbench::plot::{render_regret_curves, render_sweep_chart};

#[derive(Parser)]
#[command(name = "duelbench", about = "Dueling-bandit regret benchmark driver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment at a single arm count
    Run(RunArgs),
    /// Run the experiment for each arm count in a list
    Sweep(RunArgs),
    /// Render an SVG chart from a summary JSON file
    Plot {
        /// summary.json or sweep_summary.json produced by run/sweep
        summary: PathBuf,
        /// output SVG path
        output: PathBuf,
    },
    /// Check a config file without running anything
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// TOML config file; flags below override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    horizon: Option<u64>,
    /// arm count, or comma-separated list for sweep
    #[arg(long)]
    arms: Option<String>,
    #[arg(long)]
    games: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    /// comma-separated policy names (sup-klucb, rucb, dts, random)
    #[arg(long)]
    policies: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// run every job on the driving thread, in job order
    #[arg(long)]
    serial: bool,
    /// number of log-spaced regret checkpoints per run
    #[arg(long)]
    checkpoints: Option<usize>,
    #[arg(long)]
    min_gap: Option<f64>,
}

/// `arms` accepts a single count or a list in config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Arms {
    One(usize),
    Many(Vec<usize>),
}

impl Arms {
    fn list(&self) -> Vec<usize> {
        match self {
            Arms::One(k) => vec![*k],
            Arms::Many(ks) => ks.clone(),
        }
    }
}

/// The config file schema; also echoed (fully resolved) into the results
/// directory so results can be traced back to their exact settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CliConfig {
    arms: Arms,
    horizon: u64,
    games: usize,
    iterations: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    min_gap: f64,
    #[serde(default = "default_checkpoints")]
    checkpoints: usize,
    #[serde(default = "default_out")]
    out: PathBuf,
    #[serde(default)]
    serial: bool,
    policies: Vec<PolicySpec>,
}

fn default_checkpoints() -> usize {
    200
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn resolve_config(args: &RunArgs) -> Result<CliConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            toml::from_str::<CliConfig>(&text)
                .map_err(|e| config_err(format!("{}: {e}", path.display())))?
        }
        None => CliConfig {
            arms: Arms::One(0),
            horizon: 0,
            games: 1,
            iterations: 1,
            seed: 0,
            min_gap: 0.0,
            checkpoints: default_checkpoints(),
            out: default_out(),
            serial: false,
            policies: Vec::new(),
        },
    };
    if let Some(arms) = &args.arms {
        let ks: Result<Vec<usize>, _> =
            arms.split(',').map(|s| s.trim().parse::<usize>()).collect();
        let ks = ks.map_err(|e| config_err(format!("--arms: {e}")))?;
        cfg.arms = if ks.len() == 1 { Arms::One(ks[0]) } else { Arms::Many(ks) };
    }
    if let Some(policies) = &args.policies {
        cfg.policies = policies
            .split(',')
            .map(|name| PolicySpec::from_name(name.trim()))
            .collect::<Result<_, _>>()?;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.horizon {
        cfg.horizon = v;
    }
    if let Some(v) = args.games {
        cfg.games = v;
    }
    if let Some(v) = args.iterations {
        cfg.iterations = v;
    }
    if let Some(v) = args.checkpoints {
        cfg.checkpoints = v;
    }
    if let Some(v) = args.min_gap {
        cfg.min_gap = v;
    }
    if let Some(v) = &args.out {
        cfg.out = v.clone();
    }
    cfg.serial |= args.serial;

    if cfg.policies.is_empty() {
        return Err(config_err("no policies configured (config file or --policies)"));
    }
    if cfg.arms.list().is_empty() {
        return Err(config_err("arm list is empty"));
    }
    if cfg.horizon == 0 {
        return Err(config_err("horizon not set (config file or --horizon)"));
    }
    if cfg.arms.list().iter().any(|&k| k == 0) {
        return Err(config_err("arm counts must be positive"));
    }
    Ok(cfg)
}

fn experiment_config(cfg: &CliConfig, k: usize) -> ExperimentConfig {
    ExperimentConfig {
        k,
        horizon: cfg.horizon,
        games: cfg.games,
        iterations: cfg.iterations,
        policies: cfg.policies.clone(),
        seed: cfg.seed,
        min_gap: cfg.min_gap,
        checkpoints: cfg.checkpoints,
    }
}

fn exec_mode(cfg: &CliConfig) -> ExecMode {
    if cfg.serial {
        ExecMode::Serial
    } else {
        ExecMode::Parallel { threads: None }
    }
}

fn echo_config(cfg: &CliConfig, dir: &Path) -> Result<(), Error> {
    let text = toml::to_string_pretty(cfg)
        .map_err(|e| config_err(format!("config echo serialization: {e}")))?;
    fs::write(dir.join("config.resolved.toml"), text)?;
    Ok(())
}

fn run_one_k(cfg: &CliConfig, k: usize, dir: &Path) -> Result<BTreeMap<String, PolicySummary>, Error> {
    let result = run_experiment(&experiment_config(cfg, k), exec_mode(cfg))?;
    fs::create_dir_all(dir.join("instances"))?;
    for (g, instance) in result.instances.iter().enumerate() {
        let file = fs::File::create(dir.join("instances").join(format!("game_{g}.csv")))?;
        instance.write_csv(BufWriter::new(file))?;
    }
    write_results_csv(
        BufWriter::new(fs::File::create(dir.join("results.csv"))?),
        &result.runs,
    )?;
    write_summary_json(
        BufWriter::new(fs::File::create(dir.join("summary.json"))?),
        &result.summary,
    )?;
    Ok(result.summary)
}

fn cmd_run(args: &RunArgs) -> Result<(), Error> {
    let cfg = resolve_config(args)?;
    let ks = cfg.arms.list();
    if ks.len() != 1 {
        return Err(config_err("run takes a single arm count; use `sweep` for a list"));
    }
    fs::create_dir_all(&cfg.out)?;
    echo_config(&cfg, &cfg.out)?;
    let summary = run_one_k(&cfg, ks[0], &cfg.out)?;
    for (policy, s) in &summary {
        println!(
            "{policy}: final mean regret {:.2}, winner accuracy {:.2}",
            s.mean.last().unwrap(),
            s.final_winner_accuracy
        );
    }
    Ok(())
}

fn cmd_sweep(args: &RunArgs) -> Result<(), Error> {
    let cfg = resolve_config(args)?;
    let ks = cfg.arms.list();
    fs::create_dir_all(&cfg.out)?;
    echo_config(&cfg, &cfg.out)?;
    let mut per_k = Vec::new();
    for &k in &ks {
        let dir = cfg.out.join(format!("k_{k}"));
        fs::create_dir_all(&dir)?;
        let summary = run_one_k(&cfg, k, &dir)?;
        println!("K = {k} done");
        per_k.push((k, summary));
    }
    let sweep = sweep_summary(&per_k);
    let text = serde_json::to_string_pretty(&sweep)
        .map_err(|e| config_err(format!("sweep summary serialization: {e}")))?;
    fs::write(cfg.out.join("sweep_summary.json"), text + "\n")?;
    Ok(())
}

fn cmd_plot(summary_path: &Path, output: &Path) -> Result<(), Error> {
    let text = fs::read_to_string(summary_path)?;
    let svg = if let Ok(summary) =
        serde_json::from_str::<BTreeMap<String, PolicySummary>>(&text)
    {
        render_regret_curves(&summary)
    } else {
        let sweep = serde_json::from_str::<BTreeMap<String, SweepSummary>>(&text)
            .map_err(|e| config_err(format!("{}: not a summary file: {e}", summary_path.display())))?;
        render_sweep_chart(&sweep)
    };
    fs::write(output, svg)?;
    Ok(())
}

fn cmd_validate(path: &Path) -> Result<(), Error> {
    let args = RunArgs {
        config: Some(path.to_path_buf()),
        seed: None,
        horizon: None,
        arms: None,
        games: None,
        iterations: None,
        policies: None,
        out: None,
        serial: false,
        checkpoints: None,
        min_gap: None,
    };
    let cfg = resolve_config(&args)?;
    for &k in &cfg.arms.list() {
        experiment_config(&cfg, k).validate()?;
    }
    println!("config ok: arms {:?}, {} policies", cfg.arms.list(), cfg.policies.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Plot { summary, output } => cmd_plot(summary, output),
        Command::Validate { config } => cmd_validate(config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
