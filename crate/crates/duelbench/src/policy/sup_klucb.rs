//! Sup-KLUCB: reduces the K-armed Copeland dueling bandit to a
//! K(K+1)/2-armed KL-UCB problem over pair arms with means
//! `mu[f(i, j)] = Sup_i * Sup_j`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kl::{kl_ucb_index, KlBudget, BISECTION_TOL};
use crate::policy::{argmax_lowest, DuelPolicy, EstimatorState};

/// Two indices within this distance of each other are indistinguishable at
/// the precision the bisection delivers, so selection treats them as tied.
const INDEX_TIE_TOL: f64 = BISECTION_TOL;

/// Exploration constants for the KL-UCB budget
/// `c1 * ln(n - kbar) + c2 * ln(ln(n - kbar) + 1)`.
#[derive(Debug, Clone)]
pub struct SupKlucbConfig {
    c1: f64,
    c2: f64,
}

impl SupKlucbConfig {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !(c1 > 0.0) {
            return Err(Error::PolicyConfig(format!("sup-klucb needs c1 > 0, got {c1}")));
        }
        if !(c2 >= 0.0) {
            return Err(Error::PolicyConfig(format!("sup-klucb needs c2 >= 0, got {c2}")));
        }
        Ok(SupKlucbConfig { c1, c2 })
    }

    /// Default constants `c1 = 2/K` and `c2 = 3/K + 40/(K-2)^2`.
    ///
    /// `c2` is singular at `K = 2`, so defaults require `K >= 3`; a
    /// two-armed run must supply explicit constants.
    pub fn defaults(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::PolicyConfig(format!(
                "default sup-klucb constants are undefined for K = {k}: \
                 c2 = 3/K + 40/(K-2)^2 is singular at K = 2; pass explicit c1/c2"
            )));
        }
        let kf = k as f64;
        SupKlucbConfig::new(2.0 / kf, 3.0 / kf + 40.0 / ((kf - 2.0) * (kf - 2.0)))
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }
}

pub struct SupKlucb {
    est: EstimatorState,
    cfg: SupKlucbConfig,
    rng: ChaCha8Rng,
    round: u64,
    pending: Option<usize>,
    index_buf: Vec<f64>,
    tie_buf: Vec<usize>,
}

impl SupKlucb {
    pub fn new(k: usize, cfg: SupKlucbConfig, seed: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewArms { k, min: 2 });
        }
        let est = EstimatorState::new(k);
        let kbar = est.map().kbar();
        Ok(SupKlucb {
            est,
            cfg,
            rng: ChaCha8Rng::seed_from_u64(seed),
            round: 0,
            pending: None,
            index_buf: vec![0.0; kbar],
            tie_buf: Vec::with_capacity(kbar),
        })
    }

    pub fn estimator(&self) -> &EstimatorState {
        &self.est
    }

    /// Exploration budget at round `n` (valid for `n > kbar`).
    pub fn threshold(&self, n: u64) -> f64 {
        let t = (n - self.est.map().kbar() as u64) as f64;
        self.cfg.c1 * t.ln() + self.cfg.c2 * (t.ln() + 1.0).ln()
    }

    /// Index-maximizing flat arm at round `n`, ties broken uniformly at
    /// random from the policy RNG.
    ///
    /// Indices are only resolved to the bisection tolerance, so any index
    /// within that tolerance of the maximum counts as tied. Exact float
    /// equality would be too strict: a self-pair whose estimated mean sits
    /// at exactly 1 holds an index of exactly 1 forever, and since
    /// self-duels never move the Sup estimates, the policy would lock onto
    /// it permanently even when the estimate is a fluke of the first few
    /// samples. Tolerance ties let near-saturated competitors through, and
    /// a handful of their plays either confirm or refute the leader.
    fn select(&mut self, n: u64) -> usize {
        let tau = self.threshold(n);
        let mu = self.est.mu_hat();
        for (c, &m) in mu.iter().enumerate() {
            let budget = KlBudget::new(self.est.n_plays()[c], m, tau)
                .expect("counters and means are valid by construction");
            self.index_buf[c] = kl_ucb_index(&budget);
        }
        let best = self.index_buf.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        self.tie_buf.clear();
        for (c, &q) in self.index_buf.iter().enumerate() {
            if q >= best - INDEX_TIE_TOL {
                self.tie_buf.push(c);
            }
        }
        if self.tie_buf.len() == 1 {
            self.tie_buf[0]
        } else {
            self.tie_buf[self.rng.random_range(0..self.tie_buf.len())]
        }
    }
}

impl DuelPolicy for SupKlucb {
    fn propose(&mut self, round: u64) -> (usize, usize) {
        assert!(self.pending.is_none(), "propose called before observe");
        self.round += 1;
        debug_assert_eq!(round, self.round, "caller round counter out of sync");
        let kbar = self.est.map().kbar() as u64;
        // Rounds 1..=kbar play every pair once in flat-index order.
        let idx = if self.round <= kbar {
            (self.round - 1) as usize
        } else {
            self.select(self.round)
        };
        self.pending = Some(idx);
        self.est.map().pair(idx).expect("selected index in range")
    }

    fn observe(&mut self, won: bool) {
        let idx = self.pending.take().expect("observe called before propose");
        self.est.record(idx, won);
    }

    fn recommend(&self) -> usize {
        argmax_lowest(self.est.sup_hat())
    }
}
