//! Relative Upper Confidence Bound baseline: optimistic bounds on pairwise
//! preference probabilities, first arm from the set of potential Condorcet
//! winners, second arm the strongest challenger.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::policy::{argmax_lowest, DuelPolicy};

pub struct Rucb {
    k: usize,
    alpha: f64,
    // wins[i * k + j]: times arm i beat arm j (ordered; diagonal unused)
    wins: Vec<u64>,
    rng: ChaCha8Rng,
    pending: Option<(usize, usize)>,
}

impl Rucb {
    pub fn new(k: usize, alpha: f64, seed: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewArms { k, min: 2 });
        }
        if !(alpha > 0.5) {
            return Err(Error::PolicyConfig(format!("rucb needs alpha > 0.5, got {alpha}")));
        }
        Ok(Rucb {
            k,
            alpha,
            wins: vec![0; k * k],
            rng: ChaCha8Rng::seed_from_u64(seed),
            pending: None,
        })
    }

    /// Upper confidence bound on P(i beats j): 1 when the pair is unplayed,
    /// 0.5 on the diagonal.
    pub fn upper_bound(&self, i: usize, j: usize, t: u64) -> f64 {
        if i == j {
            return 0.5;
        }
        let n = self.wins[i * self.k + j] + self.wins[j * self.k + i];
        if n == 0 {
            return 1.0;
        }
        let nf = n as f64;
        let mean = self.wins[i * self.k + j] as f64 / nf;
        (mean + (self.alpha * (t as f64).ln() / nf).sqrt()).min(1.0)
    }

    fn empirical_copeland(&self) -> Vec<f64> {
        (0..self.k)
            .map(|i| {
                let beats = (0..self.k)
                    .filter(|&j| {
                        if j == i {
                            return false;
                        }
                        let n = self.wins[i * self.k + j] + self.wins[j * self.k + i];
                        n > 0 && (self.wins[i * self.k + j] as f64 / n as f64) > 0.5
                    })
                    .count();
                beats as f64 / (self.k - 1) as f64
            })
            .collect()
    }

    fn choose_uniform(&mut self, candidates: &[usize]) -> usize {
        candidates[self.rng.random_range(0..candidates.len())]
    }
}

impl DuelPolicy for Rucb {
    fn propose(&mut self, round: u64) -> (usize, usize) {
        assert!(self.pending.is_none(), "propose called before observe");
        let t = round.max(1);
        // Potential Condorcet winners: rows optimistic against everyone.
        let candidates: Vec<usize> = (0..self.k)
            .filter(|&i| (0..self.k).all(|j| j == i || self.upper_bound(i, j, t) >= 0.5))
            .collect();
        let first = if candidates.is_empty() {
            self.rng.random_range(0..self.k)
        } else {
            self.choose_uniform(&candidates)
        };
        // Challenger maximizing the bound against the first arm; the first
        // arm itself enters at exactly 0.5, so a converged state self-duels.
        let mut best = f64::NEG_INFINITY;
        let mut tied: Vec<usize> = Vec::new();
        for j in 0..self.k {
            let u = self.upper_bound(j, first, t);
            if u > best {
                best = u;
                tied.clear();
                tied.push(j);
            } else if u == best {
                tied.push(j);
            }
        }
        let second = self.choose_uniform(&tied);
        self.pending = Some((first, second));
        (first.min(second), first.max(second))
    }

    fn observe(&mut self, won: bool) {
        let (first, second) = self.pending.take().expect("observe called before propose");
        if first == second {
            return;
        }
        let (lo, hi) = (first.min(second), first.max(second));
        if won {
            self.wins[lo * self.k + hi] += 1;
        } else {
            self.wins[hi * self.k + lo] += 1;
        }
    }

    fn recommend(&self) -> usize {
        argmax_lowest(&self.empirical_copeland())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unplayed_state_is_fully_optimistic() {
        let policy = Rucb::new(4, 1.01, 0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(policy.upper_bound(i, j, 1), 1.0);
                }
            }
        }
    }

    #[test]
    fn alpha_never_shrinks_bounds() {
        let mut a = Rucb::new(3, 0.6, 0).unwrap();
        let mut b = Rucb::new(3, 2.0, 0).unwrap();
        for policy in [&mut a, &mut b] {
            policy.wins[0 * 3 + 1] = 3;
            policy.wins[1 * 3 + 0] = 7;
        }
        for t in [2u64, 10, 1000] {
            assert!(b.upper_bound(0, 1, t) >= a.upper_bound(0, 1, t));
        }
    }

    #[test]
    fn dominant_arm_takes_over_two_arm_case() {
        // Arm 0 always wins; the candidate set must shrink to {0} and play
        // must concentrate on the self-pair (0, 0).
        let mut policy = Rucb::new(2, 1.01, 42).unwrap();
        let mut late_self_duels = 0;
        for n in 1..=3_000u64 {
            let (i, j) = policy.propose(n);
            assert!(i <= j);
            policy.observe(i == 0 && (j == 1));
            if n > 2_500 && (i, j) == (0, 0) {
                late_self_duels += 1;
            }
        }
        assert!(late_self_duels > 400, "got only {late_self_duels} late self-duels");
        assert_eq!(policy.recommend(), 0);
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(Rucb::new(3, 0.5, 0).is_err());
    }
}
