//! Bernoulli Kullback-Leibler divergence and the KL-UCB index solver.

use crate::error::{Error, Result};

/// Bisection tolerance for the index search.
pub(crate) const BISECTION_TOL: f64 = 1e-9;
const BISECTION_MAX_ITERS: u32 = 100;

fn kl_term(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if y == 0.0 {
        f64::INFINITY
    } else {
        x * (x / y).ln()
    }
}

/// KL divergence between Bernoulli(p) and Bernoulli(q), with the conventions
/// `0 ln 0 = 0 ln (0/0) = 0` and `x ln (x/0) = +inf` for `x > 0`.
pub fn kl_bernoulli(p: f64, q: f64) -> Result<f64> {
    for &v in &[p, q] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidProbability { value: v });
        }
    }
    Ok(kl_bernoulli_unchecked(p, q))
}

pub(crate) fn kl_bernoulli_unchecked(p: f64, q: f64) -> f64 {
    kl_term(p, q) + kl_term(1.0 - p, 1.0 - q)
}

/// Inputs to one KL-UCB index computation: play count, empirical mean, and
/// the exploration budget on the right-hand side of the index inequality.
#[derive(Debug, Clone, Copy)]
pub struct KlBudget {
    n_pulls: u64,
    mean: f64,
    threshold: f64,
}

impl KlBudget {
    pub fn new(n_pulls: u64, mean: f64, threshold: f64) -> Result<Self> {
        if n_pulls == 0 {
            return Err(Error::PolicyConfig("KL budget needs n_pulls >= 1".into()));
        }
        if !(0.0..=1.0).contains(&mean) {
            return Err(Error::InvalidProbability { value: mean });
        }
        if !(threshold >= 0.0) {
            return Err(Error::PolicyConfig(format!(
                "KL budget threshold must be nonnegative, got {threshold}"
            )));
        }
        Ok(KlBudget { n_pulls, mean, threshold })
    }

    pub fn n_pulls(&self) -> u64 {
        self.n_pulls
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

/// Largest `q` in `[mean, 1]` with `n_pulls * kl(mean, q) <= threshold`.
///
/// `kl(mean, .)` is continuous and nondecreasing on that interval, so plain
/// bisection applies. The lower bisection endpoint is returned, keeping the
/// budget inequality satisfied at the returned value.
pub fn kl_ucb_index(budget: &KlBudget) -> f64 {
    let n = budget.n_pulls as f64;
    let mu = budget.mean;
    let tau = budget.threshold;

    if tau == 0.0 || mu == 1.0 {
        return if mu == 1.0 { 1.0 } else { mu };
    }
    if mu == 0.0 {
        return 1.0 - (-tau / n).exp();
    }

    let mut lo = mu;
    let mut hi = 1.0;
    for _ in 0..BISECTION_MAX_ITERS {
        if hi - lo < BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if n * kl_bernoulli_unchecked(mu, mid) <= tau {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
