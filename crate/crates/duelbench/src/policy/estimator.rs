//! Per-pair win/play counters and the empirical Copeland (Sup) scores
//! derived from them.

use crate::error::{Error, Result};
use crate::pair::PairIndexMap;

/// Win/play counters over flat pair indices plus incrementally maintained
/// empirical Sup scores.
///
/// `sup[i]` is the fraction (out of `K - 1`) of other arms `j` with
/// empirical `p_hat(i, j) > 0.5`; unplayed pairs count as exact ties and
/// therefore contribute nothing. Self-pairs never enter the count.
#[derive(Debug, Clone)]
pub struct EstimatorState {
    map: PairIndexMap,
    n_plays: Vec<u64>,
    wins: Vec<u64>,
    sup: Vec<f64>,
}

impl EstimatorState {
    pub fn new(k: usize) -> Self {
        let map = PairIndexMap::new(k);
        let kbar = map.kbar();
        EstimatorState {
            map,
            n_plays: vec![0; kbar],
            wins: vec![0; kbar],
            sup: vec![0.0; k],
        }
    }

    pub fn map(&self) -> &PairIndexMap {
        &self.map
    }

    pub fn k(&self) -> usize {
        self.map.k()
    }

    pub fn n_plays(&self) -> &[u64] {
        &self.n_plays
    }

    pub fn wins(&self) -> &[u64] {
        &self.wins
    }

    /// Records one duel outcome for the pair at flat index `idx`; `won` is
    /// true when the lower-index arm was preferred. Only the two arms of
    /// the pair can change Sup score, so just their rows are recounted.
    pub fn record(&mut self, idx: usize, won: bool) {
        let (i, j) = self.map.pair(idx).expect("flat index in range");
        self.n_plays[idx] += 1;
        if won {
            self.wins[idx] += 1;
        }
        if i != j {
            self.sup[i] = self.count_sup(i);
            self.sup[j] = self.count_sup(j);
        }
    }

    /// Empirical probability that arm `i` beats arm `j`, if the pair has
    /// been played. Ordered: `p_hat(j, i) = 1 - p_hat(i, j)`.
    pub fn p_hat(&self, i: usize, j: usize) -> Option<f64> {
        let (a, b, flip) = if i <= j { (i, j, false) } else { (j, i, true) };
        let idx = self.map.index(a, b).expect("arms in range");
        if self.n_plays[idx] == 0 {
            return None;
        }
        let p = self.wins[idx] as f64 / self.n_plays[idx] as f64;
        Some(if flip { 1.0 - p } else { p })
    }

    fn count_sup(&self, i: usize) -> f64 {
        let k = self.k();
        let beats = (0..k)
            .filter(|&j| j != i && self.p_hat(i, j).map_or(false, |p| p > 0.5))
            .count();
        beats as f64 / (k - 1) as f64
    }

    /// Current empirical Sup scores (maintained incrementally).
    pub fn sup_hat(&self) -> &[f64] {
        &self.sup
    }

    /// Empirical Sup scores with the played-everywhere precondition
    /// enforced: errors on the first unplayed pair.
    pub fn sup_scores(&self) -> Result<Vec<f64>> {
        for (idx, &n) in self.n_plays.iter().enumerate() {
            if n == 0 {
                let (i, j) = self.map.pair(idx).unwrap();
                return Err(Error::UnplayedPair { i, j });
            }
        }
        Ok(self.sup.clone())
    }

    /// Full recount of every arm's Sup score. Must agree with the
    /// incrementally maintained [`sup_hat`](Self::sup_hat) at all times.
    pub fn recompute_sup(&self) -> Vec<f64> {
        (0..self.k()).map(|i| self.count_sup(i)).collect()
    }

    /// Estimated reduced-arm means: `mu_hat[f(i, j)] = sup[i] * sup[j]`.
    pub fn mu_hat(&self) -> Vec<f64> {
        self.map
            .pairs()
            .iter()
            .map(|&(i, j)| self.sup[i] * self.sup[j])
            .collect()
    }

    pub fn total_plays(&self) -> u64 {
        self.n_plays.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_arm_hand_count() {
        let mut est = EstimatorState::new(2);
        let idx = est.map().index(0, 1).unwrap();
        for won in [true, true, true, false] {
            est.record(idx, won);
        }
        assert_eq!(est.p_hat(0, 1), Some(0.75));
        assert_eq!(est.sup_hat(), &[1.0, 0.0]);
    }

    #[test]
    fn exact_half_estimates_count_as_zero() {
        let mut est = EstimatorState::new(3);
        for i in 0..3 {
            for j in i..3 {
                let idx = est.map().index(i, j).unwrap();
                est.record(idx, true);
                est.record(idx, false);
            }
        }
        assert_eq!(est.sup_hat(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn dominant_chain_hand_count() {
        let mut est = EstimatorState::new(3);
        // arm 0 won every duel vs 1 and 2, arm 1 won every duel vs 2
        for (i, j, w) in [(0, 1, true), (0, 2, true), (1, 2, true)] {
            let idx = est.map().index(i, j).unwrap();
            est.record(idx, w);
        }
        assert_eq!(est.sup_hat(), &[1.0, 0.5, 0.0]);
    }

    #[test]
    fn counter_arithmetic() {
        let mut est = EstimatorState::new(2);
        let idx = est.map().index(0, 1).unwrap();
        for w in [true, true, true, false] {
            est.record(idx, w);
        }
        assert_eq!((est.n_plays()[idx], est.wins()[idx]), (4, 3));
        est.record(idx, true);
        assert_eq!((est.n_plays()[idx], est.wins()[idx]), (5, 4));
    }

    #[test]
    fn sup_scores_errors_on_unplayed_pair() {
        let est = EstimatorState::new(3);
        assert!(matches!(est.sup_scores(), Err(crate::error::Error::UnplayedPair { .. })));
    }

    #[test]
    fn incremental_matches_recompute_on_random_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for k in [2usize, 3, 5, 8] {
            let mut est = EstimatorState::new(k);
            let kbar = est.map().kbar();
            for _ in 0..2_000 {
                let idx = rng.random_range(0..kbar);
                est.record(idx, rng.random::<bool>());
                assert_eq!(est.sup_hat(), est.recompute_sup().as_slice());
            }
        }
    }

    #[test]
    fn mu_hat_is_pairwise_product() {
        let mut est = EstimatorState::new(3);
        for (i, j, w) in [(0, 1, true), (0, 2, true), (1, 2, true)] {
            let idx = est.map().index(i, j).unwrap();
            est.record(idx, w);
        }
        let sup = est.sup_hat().to_vec();
        let mu = est.mu_hat();
        for (idx, &(i, j)) in est.map().pairs().iter().enumerate() {
            assert_eq!(mu[idx], sup[i] * sup[j]);
            assert!((0.0..=1.0).contains(&mu[idx]));
        }
    }
}
