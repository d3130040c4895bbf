//! Monte Carlo experiment harness: games x iterations x policies, with
//! position-derived seeds so any single run is re-derivable in isolation
//! and parallel execution matches serial output exactly.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{generate_random_instance, PreferenceMatrix};
use crate::policy::{Dts, DuelPolicy, RandomPolicy, Rucb, SupKlucb, SupKlucbConfig};
use crate::sim::{log_spaced_checkpoints, run_single, Environment};

/// Policy selection plus parameters, as named in configs and result files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum PolicySpec {
    SupKlucb {
        #[serde(skip_serializing_if = "Option::is_none")]
        c1: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        c2: Option<f64>,
    },
    Rucb {
        #[serde(default = "default_rucb_alpha")]
        alpha: f64,
    },
    Dts {
        #[serde(default = "default_dts_alpha")]
        alpha: f64,
    },
    Random,
}

fn default_rucb_alpha() -> f64 {
    1.01
}

fn default_dts_alpha() -> f64 {
    0.51
}

impl PolicySpec {
    pub fn id(&self) -> &'static str {
        match self {
            PolicySpec::SupKlucb { .. } => "sup-klucb",
            PolicySpec::Rucb { .. } => "rucb",
            PolicySpec::Dts { .. } => "dts",
            PolicySpec::Random => "random",
        }
    }

    /// Parses a bare policy name with default parameters.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "sup-klucb" => Ok(PolicySpec::SupKlucb { c1: None, c2: None }),
            "rucb" => Ok(PolicySpec::Rucb { alpha: default_rucb_alpha() }),
            "dts" => Ok(PolicySpec::Dts { alpha: default_dts_alpha() }),
            "random" => Ok(PolicySpec::Random),
            other => Err(Error::Config(format!(
                "unknown policy {other:?}; expected sup-klucb, rucb, dts, or random"
            ))),
        }
    }

    /// Checks parameters against the arm count without building state.
    pub fn validate(&self, k: usize) -> Result<()> {
        self.build(k, 0).map(|_| ())
    }

    pub fn build(&self, k: usize, seed: u64) -> Result<Box<dyn DuelPolicy + Send>> {
        Ok(match *self {
            PolicySpec::SupKlucb { c1, c2 } => {
                let cfg = match (c1, c2) {
                    (Some(c1), Some(c2)) => SupKlucbConfig::new(c1, c2)?,
                    (None, None) => SupKlucbConfig::defaults(k)?,
                    (c1, c2) => {
                        let defaults = SupKlucbConfig::defaults(k)?;
                        SupKlucbConfig::new(
                            c1.unwrap_or_else(|| defaults.c1()),
                            c2.unwrap_or_else(|| defaults.c2()),
                        )?
                    }
                };
                Box::new(SupKlucb::new(k, cfg, seed)?)
            }
            PolicySpec::Rucb { alpha } => Box::new(Rucb::new(k, alpha, seed)?),
            PolicySpec::Dts { alpha } => Box::new(Dts::new(k, alpha, seed)?),
            PolicySpec::Random => Box::new(RandomPolicy::new(k, seed)),
        })
    }
}

/// One experiment: `games` random instances, `iterations` repeats per
/// instance per policy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub k: usize,
    pub horizon: u64,
    pub games: usize,
    pub iterations: usize,
    pub policies: Vec<PolicySpec>,
    pub seed: u64,
    #[serde(default)]
    pub min_gap: f64,
    #[serde(default = "default_checkpoints")]
    pub checkpoints: usize,
}

fn default_checkpoints() -> usize {
    200
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let kbar = self.k * (self.k + 1) / 2;
        if self.horizon < kbar as u64 {
            return Err(Error::Config(format!(
                "horizon {} is below the pair count {kbar} needed for initialization",
                self.horizon
            )));
        }
        if self.games == 0 || self.iterations == 0 {
            return Err(Error::Config("games and iterations must be at least 1".into()));
        }
        if self.policies.is_empty() {
            return Err(Error::Config("at least one policy is required".into()));
        }
        if self.checkpoints < 2 {
            return Err(Error::Config("need at least 2 checkpoints".into()));
        }
        for p in &self.policies {
            p.validate(self.k)?;
        }
        generate_random_instance(self.k, 0, self.min_gap).map(|_| ())?;
        Ok(())
    }
}

/// Serial or parallel execution; both produce identical results because
/// every run's seeds derive from its position, not execution order.
#[derive(Debug, Clone, Copy)]
pub enum ExecMode {
    Serial,
    Parallel { threads: Option<usize> },
}

/// One (policy, game, iteration) trajectory.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub policy: String,
    pub game: usize,
    pub iteration: usize,
    pub checkpoints: Vec<(u64, f64)>,
    pub recommended: usize,
    pub true_winner: usize,
    pub wall_time_secs: f64,
}

/// Aggregate per policy: mean cumulative-regret trajectory with a central
/// 50% band, plus how often the final recommendation hit the true winner.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolicySummary {
    pub rounds: Vec<u64>,
    pub mean: Vec<f64>,
    pub p25: Vec<f64>,
    pub p75: Vec<f64>,
    pub final_winner_accuracy: f64,
}

pub struct ExperimentResult {
    pub instances: Vec<PreferenceMatrix>,
    pub runs: Vec<RunResult>,
    pub summary: BTreeMap<String, PolicySummary>,
}

/// Stable 64-bit mix (splitmix64 finalizer folded over the parts), used to
/// derive instance/environment/policy seeds from the master seed and run
/// position.
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x9E37_79B9_7F4A_7C15;
    for &p in parts {
        let mut z = h ^ p;
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}

fn policy_tag(spec: &PolicySpec) -> u64 {
    // FNV-1a over the policy id keeps seeds distinct per policy.
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for b in spec.id().bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

pub fn instance_seed(master: u64, game: usize) -> u64 {
    mix_seed(&[master, 1, game as u64])
}

fn env_seed(master: u64, game: usize, iteration: usize, tag: u64) -> u64 {
    mix_seed(&[master, 2, game as u64, iteration as u64, tag])
}

fn policy_seed(master: u64, game: usize, iteration: usize, tag: u64) -> u64 {
    mix_seed(&[master, 3, game as u64, iteration as u64, tag])
}

fn execute_one(
    cfg: &ExperimentConfig,
    instance: &PreferenceMatrix,
    checkpoints: &[u64],
    spec: &PolicySpec,
    game: usize,
    iteration: usize,
) -> Result<RunResult> {
    let tag = policy_tag(spec);
    let mut env = Environment::new(instance.clone(), env_seed(cfg.seed, game, iteration, tag))?;
    let mut policy = spec.build(cfg.k, policy_seed(cfg.seed, game, iteration, tag))?;
    let start = Instant::now();
    let run = run_single(&mut env, policy.as_mut(), cfg.horizon, checkpoints)?;
    Ok(RunResult {
        policy: spec.id().to_string(),
        game,
        iteration,
        checkpoints: run.checkpoints,
        recommended: run.recommended,
        true_winner: run.true_winner,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

pub fn run_experiment(cfg: &ExperimentConfig, mode: ExecMode) -> Result<ExperimentResult> {
    cfg.validate()?;
    let checkpoints = log_spaced_checkpoints(cfg.checkpoints, cfg.horizon);

    let instances: Vec<PreferenceMatrix> = (0..cfg.games)
        .map(|g| generate_random_instance(cfg.k, instance_seed(cfg.seed, g), cfg.min_gap))
        .collect::<Result<_>>()?;

    // One job per (game, iteration, policy); collection keeps job order, so
    // serial and parallel execution produce identical result vectors.
    let jobs: Vec<(usize, usize, &PolicySpec)> = (0..cfg.games)
        .flat_map(|g| {
            let policies = &cfg.policies;
            (0..cfg.iterations)
                .flat_map(move |r| policies.iter().map(move |p| (g, r, p)))
        })
        .collect();

    let run_job = |&(g, r, spec): &(usize, usize, &PolicySpec)| {
        execute_one(cfg, &instances[g], &checkpoints, spec, g, r)
    };

    let runs: Vec<RunResult> = match mode {
        ExecMode::Serial => jobs.iter().map(run_job).collect::<Result<_>>()?,
        ExecMode::Parallel { threads } => {
            let threads = threads
                .or_else(|| {
                    std::env::var("DUELBENCH_THREADS").ok().and_then(|v| v.parse().ok())
                })
                .unwrap_or(0);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| jobs.par_iter().map(run_job).collect::<Result<_>>())?
        }
    };

    let summary = summarize(&runs);
    Ok(ExperimentResult { instances, runs, summary })
}

/// Percentile with linear interpolation between order statistics.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

pub fn summarize(runs: &[RunResult]) -> BTreeMap<String, PolicySummary> {
    let mut by_policy: BTreeMap<String, Vec<&RunResult>> = BTreeMap::new();
    for run in runs {
        by_policy.entry(run.policy.clone()).or_default().push(run);
    }
    by_policy
        .into_iter()
        .map(|(policy, runs)| {
            let rounds: Vec<u64> = runs[0].checkpoints.iter().map(|&(r, _)| r).collect();
            let n_cp = rounds.len();
            let mut mean = vec![0.0; n_cp];
            let mut p25 = vec![0.0; n_cp];
            let mut p75 = vec![0.0; n_cp];
            for cp in 0..n_cp {
                let mut values: Vec<f64> =
                    runs.iter().map(|run| run.checkpoints[cp].1).collect();
                values.sort_by(|a, b| a.partial_cmp(b).unwrap());
                mean[cp] = values.iter().sum::<f64>() / values.len() as f64;
                p25[cp] = percentile(&values, 0.25);
                p75[cp] = percentile(&values, 0.75);
            }
            let hits =
                runs.iter().filter(|run| run.recommended == run.true_winner).count();
            let summary = PolicySummary {
                rounds,
                mean,
                p25,
                p75,
                final_winner_accuracy: hits as f64 / runs.len() as f64,
            };
            (policy, summary)
        })
        .collect()
}

/// Formats a value with 10 significant digits in plain decimal notation.
pub fn format_sig10(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Writes the results CSV: one row per checkpoint per run.
pub fn write_results_csv<W: Write>(mut out: W, runs: &[RunResult]) -> Result<()> {
    writeln!(out, "policy,game,iteration,round,cum_regret")?;
    for run in runs {
        for &(round, cum) in &run.checkpoints {
            writeln!(
                out,
                "{},{},{},{},{}",
                run.policy,
                run.game,
                run.iteration,
                round,
                format_sig10(cum)
            )?;
        }
    }
    Ok(())
}

pub fn write_summary_json<W: Write>(
    mut out: W,
    summary: &BTreeMap<String, PolicySummary>,
) -> Result<()> {
    let text = serde_json::to_string_pretty(summary)
        .map_err(|e| Error::Config(format!("summary serialization: {e}")))?;
    out.write_all(text.as_bytes())?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Final mean regret per arm count, the data behind a regret-vs-K chart.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub arms: Vec<usize>,
    pub final_mean_regret: Vec<f64>,
}

pub fn sweep_summary(
    per_k: &[(usize, BTreeMap<String, PolicySummary>)],
) -> BTreeMap<String, SweepSummary> {
    let mut out: BTreeMap<String, SweepSummary> = BTreeMap::new();
    for (k, summary) in per_k {
        for (policy, s) in summary {
            let entry = out
                .entry(policy.clone())
                .or_insert_with(|| SweepSummary { arms: Vec::new(), final_mean_regret: Vec::new() });
            entry.arms.push(*k);
            entry.final_mean_regret.push(*s.mean.last().unwrap());
        }
    }
    out
}
