//! Bijection between unordered arm pairs (including self-pairs) and flat
//! indices, so that each pair can be treated as a single bandit arm.
//!
//! The layout is row-major over the upper triangle including the diagonal:
//! for K = 3 the pairs (0,0), (0,1), (0,2), (1,1), (1,2), (2,2) map to
//! indices 0..6. Any bijection would do; this one is fixed so that run logs
//! stay comparable across implementations.

use crate::error::{Error, Result};

/// Maps canonical arm pairs `(i, j)` with `i <= j` to flat indices in
/// `0..kbar` where `kbar = k * (k + 1) / 2`, and back.
#[derive(Debug, Clone)]
pub struct PairIndexMap {
    k: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairIndexMap {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "pair map needs at least one arm");
        let mut pairs = Vec::with_capacity(k * (k + 1) / 2);
        for i in 0..k {
            for j in i..k {
                pairs.push((i, j));
            }
        }
        PairIndexMap { k, pairs }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of unordered pairs, `k * (k + 1) / 2`.
    pub fn kbar(&self) -> usize {
        self.pairs.len()
    }

    /// Flat index of the canonical pair `(i, j)`, `i <= j`.
    pub fn index(&self, i: usize, j: usize) -> Result<usize> {
        if i > j || j >= self.k {
            return Err(Error::PairOutOfRange { i, j, k: self.k });
        }
        // Row i starts after k + (k-1) + ... + (k-i+1) entries.
        Ok(i * self.k - (i * i - i) / 2 + (j - i))
    }

    /// Inverse of [`index`](Self::index).
    pub fn pair(&self, idx: usize) -> Result<(usize, usize)> {
        self.pairs
            .get(idx)
            .copied()
            .ok_or(Error::IndexOutOfRange { idx, kbar: self.kbar() })
    }

    /// All canonical pairs in index order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}
