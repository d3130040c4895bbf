//! Environment stepping and Copeland regret accounting for a single run.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{copeland_scores, unique_winner, PreferenceMatrix, ScoreVector};
use crate::policy::DuelPolicy;

/// Ground-truth environment: a preference matrix with a unique Copeland
/// winner plus the RNG that drives duel outcomes.
pub struct Environment {
    pm: PreferenceMatrix,
    true_scores: ScoreVector,
    winner: usize,
    rng: ChaCha8Rng,
}

impl Environment {
    pub fn new(pm: PreferenceMatrix, seed: u64) -> Result<Self> {
        let true_scores = copeland_scores(&pm);
        let winner = unique_winner(&true_scores).ok_or_else(|| {
            Error::Config("environment requires an instance with a unique Copeland winner".into())
        })?;
        Ok(Environment { pm, true_scores, winner, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn matrix(&self) -> &PreferenceMatrix {
        &self.pm
    }

    pub fn true_scores(&self) -> &ScoreVector {
        &self.true_scores
    }

    pub fn winner(&self) -> usize {
        self.winner
    }

    /// Samples one duel: 1 with probability `p[i][j]`. A self-duel is a
    /// fair coin, consistent with `p[i][i] = 0.5`.
    pub fn duel(&mut self, i: usize, j: usize) -> Result<bool> {
        let k = self.pm.k();
        if i >= k {
            return Err(Error::ArmOutOfRange { arm: i, k });
        }
        if j >= k {
            return Err(Error::ArmOutOfRange { arm: j, k });
        }
        Ok(self.rng.random::<f64>() < self.pm.prob(i, j))
    }
}

/// Per-pair Copeland regret `(2 * s[winner] - s[i] - s[j]) / 2`.
pub fn copeland_regret(true_scores: &ScoreVector, winner: usize, i: usize, j: usize) -> f64 {
    let s = true_scores.values();
    (2.0 * s[winner] - s[i] - s[j]) / 2.0
}

/// Per-round regrets and their running sum. The full per-round trace is
/// optional; long runs keep only the cumulative total.
#[derive(Debug, Clone)]
pub struct RegretLedger {
    cumulative: f64,
    rounds: u64,
    trace: Option<Vec<f64>>,
}

impl RegretLedger {
    pub fn new(keep_trace: bool) -> Self {
        RegretLedger { cumulative: 0.0, rounds: 0, trace: keep_trace.then(Vec::new) }
    }

    pub fn record(&mut self, per_round: f64) {
        debug_assert!(per_round >= 0.0);
        self.cumulative += per_round;
        self.rounds += 1;
        if let Some(trace) = &mut self.trace {
            trace.push(per_round);
        }
    }

    pub fn cumulative(&self) -> f64 {
        self.cumulative
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn per_round(&self) -> Option<&[f64]> {
        self.trace.as_deref()
    }
}

/// Outcome of one policy run: cumulative regret sampled at checkpoint
/// rounds plus the final recommendation.
#[derive(Debug, Clone)]
pub struct SingleRun {
    pub checkpoints: Vec<(u64, f64)>,
    pub recommended: usize,
    pub true_winner: usize,
}

/// `count` log-spaced checkpoint rounds over `1..=horizon`, deduplicated,
/// always ending at `horizon`.
pub fn log_spaced_checkpoints(count: usize, horizon: u64) -> Vec<u64> {
    assert!(horizon >= 1);
    let count = count.max(2);
    let lg_t = (horizon as f64).ln();
    let mut out: Vec<u64> = (0..count)
        .map(|i| {
            let frac = i as f64 / (count - 1) as f64;
            (frac * lg_t).exp().round() as u64
        })
        .map(|r| r.clamp(1, horizon))
        .collect();
    out.dedup();
    if *out.last().unwrap() != horizon {
        out.push(horizon);
    }
    out
}

/// Drives one policy against one environment for `horizon` rounds,
/// recording cumulative Copeland regret at the given checkpoint rounds
/// (strictly increasing, last one at most `horizon`).
pub fn run_single(
    env: &mut Environment,
    policy: &mut dyn DuelPolicy,
    horizon: u64,
    checkpoints: &[u64],
) -> Result<SingleRun> {
    if horizon < 1 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    debug_assert!(checkpoints.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(checkpoints.last().map_or(true, |&c| c <= horizon));

    let mut ledger = RegretLedger::new(false);
    let mut samples = Vec::with_capacity(checkpoints.len());
    let mut next_cp = 0usize;
    for n in 1..=horizon {
        let (i, j) = policy.propose(n);
        let won = env.duel(i, j)?;
        policy.observe(won);
        ledger.record(copeland_regret(&env.true_scores, env.winner, i, j));
        if next_cp < checkpoints.len() && checkpoints[next_cp] == n {
            samples.push((n, ledger.cumulative()));
            next_cp += 1;
        }
    }
    Ok(SingleRun {
        checkpoints: samples,
        recommended: policy.recommend(),
        true_winner: env.winner(),
    })
}
