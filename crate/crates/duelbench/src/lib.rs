//! Dueling-bandit simulation library: Sup-KLUCB (a reduction of K-armed
//! Copeland dueling bandits to a K(K+1)/2-armed KL-UCB problem) alongside
//! RUCB, DTS, and uniform-random baselines, with a seeded Monte Carlo
//! harness for regret-comparison benchmarks.

pub mod error;
pub mod experiment;
pub mod kl;
pub mod model;
pub mod pair;
pub mod plot;
pub mod policy;
pub mod sim;

pub use error::{Error, Result};
