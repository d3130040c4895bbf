//! Dueling policies behind a single interface: propose a pair, receive a
//! binary duel outcome, update state.

mod dts;
mod estimator;
mod random;
mod rucb;
mod sup_klucb;

pub use dts::Dts;
pub use estimator::EstimatorState;
pub use random::RandomPolicy;
pub use rucb::Rucb;
pub use sup_klucb::{SupKlucb, SupKlucbConfig};

/// A dueling-bandit policy. One round is a `propose` followed by exactly one
/// `observe`; `recommend` may be called at any time and does not mutate
/// state.
///
/// Proposed pairs are always in canonical orientation `i <= j`, and the
/// observed outcome is 1 when arm `i` was preferred over arm `j`.
pub trait DuelPolicy {
    /// Chooses the pair to duel at `round` (1-based).
    fn propose(&mut self, round: u64) -> (usize, usize);

    /// Records the outcome of the proposed duel: `won` is true when the
    /// first (lower-index) arm of the proposed pair was preferred.
    fn observe(&mut self, won: bool);

    /// Current winner estimate; ties broken by lowest arm index.
    fn recommend(&self) -> usize;
}

/// Lowest index attaining the exact maximum.
pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] > values[best] {
            best = i;
        }
    }
    best
}
