//! Uniform-random sanity baseline: proposes a uniformly random canonical
//! pair each round, recommends the empirical Copeland leader.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::policy::{argmax_lowest, DuelPolicy, EstimatorState};

pub struct RandomPolicy {
    est: EstimatorState,
    rng: ChaCha8Rng,
    pending: Option<usize>,
}

impl RandomPolicy {
    pub fn new(k: usize, seed: u64) -> Self {
        RandomPolicy {
            est: EstimatorState::new(k),
            rng: ChaCha8Rng::seed_from_u64(seed),
            pending: None,
        }
    }
}

impl DuelPolicy for RandomPolicy {
    fn propose(&mut self, _round: u64) -> (usize, usize) {
        assert!(self.pending.is_none(), "propose called before observe");
        let idx = self.rng.random_range(0..self.est.map().kbar());
        self.pending = Some(idx);
        self.est.map().pair(idx).expect("sampled index in range")
    }

    fn observe(&mut self, won: bool) {
        let idx = self.pending.take().expect("observe called before propose");
        self.est.record(idx, won);
    }

    fn recommend(&self) -> usize {
        argmax_lowest(self.est.sup_hat())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_arms_cover_all_three_pairs_roughly_uniformly() {
        let mut policy = RandomPolicy::new(2, 17);
        let mut counts = std::collections::HashMap::new();
        for n in 1..=3_000u64 {
            let pair = policy.propose(n);
            *counts.entry(pair).or_insert(0u32) += 1;
            policy.observe(false);
        }
        assert_eq!(counts.len(), 3);
        for (&pair, &c) in &counts {
            assert!(
                (800..1200).contains(&c),
                "pair {:?} drawn {} times out of 3000",
                pair,
                c
            );
        }
    }
}
