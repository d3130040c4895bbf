//! Ground-truth dueling-bandit environment model: preference matrices,
//! score functions (Copeland, Borda, normalized custom criteria), winner
//! determination, and random instance generation.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Absolute tolerance for validating skew-symmetry and the diagonal.
const VALIDATE_TOL: f64 = 1e-12;

/// Generated instances keep every off-diagonal entry at least this far
/// from 0.5, so strict-inequality Copeland counts are unambiguous.
const HALF_EXCLUSION: f64 = 1e-9;

/// Default rejection budget for random instance generation.
pub const DEFAULT_REJECTION_BUDGET: usize = 10_000;

/// K x K duel-probability matrix. `p[i][j]` is the probability that arm `i`
/// is preferred over arm `j`; rows and columns are tied by `p[i][j] + p[j][i] = 1`
/// and the diagonal is exactly 0.5.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceMatrix {
    k: usize,
    p: Vec<f64>, // row-major
}

impl PreferenceMatrix {
    /// Validates a raw square matrix and symmetrizes it exactly.
    ///
    /// Skew-symmetry and the diagonal are checked to absolute tolerance
    /// 1e-12; afterwards the lower triangle is rewritten as
    /// `p[j][i] = 1 - p[i][j]` and the diagonal pinned to exactly 0.5, so
    /// the invariants hold exactly, not just within tolerance.
    pub fn validate(raw: &[Vec<f64>]) -> Result<Self> {
        let k = raw.len();
        if k < 2 {
            return Err(Error::TooFewArms { k, min: 2 });
        }
        for (row, r) in raw.iter().enumerate() {
            if r.len() != k {
                return Err(Error::MatrixNotSquare { rows: k, row, cols: r.len() });
            }
        }
        for i in 0..k {
            for j in 0..k {
                let v = raw[i][j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::EntryOutOfRange { i, j, value: v });
                }
            }
        }
        for i in 0..k {
            if (raw[i][i] - 0.5).abs() > VALIDATE_TOL {
                return Err(Error::DiagonalNotHalf { i, value: raw[i][i] });
            }
            for j in (i + 1)..k {
                let sum = raw[i][j] + raw[j][i];
                if (sum - 1.0).abs() > VALIDATE_TOL {
                    return Err(Error::NotSkewSymmetric { i, j, sum });
                }
            }
        }
        let mut p = vec![0.0; k * k];
        for i in 0..k {
            p[i * k + i] = 0.5;
            for j in (i + 1)..k {
                p[i * k + j] = raw[i][j];
                p[j * k + i] = 1.0 - raw[i][j];
            }
        }
        Ok(PreferenceMatrix { k, p })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Probability that arm `i` beats arm `j`.
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.k && j < self.k);
        self.p[i * self.k + j]
    }

    /// Reads the CSV matrix format: K rows x K columns of decimal
    /// probabilities, no header.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let mut rows = Vec::new();
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|s| s.trim().parse::<f64>()).collect();
            rows.push(row.map_err(|e| Error::MatrixParse {
                path: path.display().to_string(),
                reason: format!("line {}: {e}", lineno + 1),
            })?);
        }
        Self::validate(&rows)
    }

    /// Writes the CSV matrix format. `Display` for `f64` is shortest
    /// round-trip, so a written matrix reloads bit-exactly.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for i in 0..self.k {
            let row: Vec<String> = (0..self.k).map(|j| self.prob(i, j).to_string()).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Which criterion produced a score vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreKind {
    Copeland,
    Borda,
    NormalizedCustom,
}

/// One score per arm, all values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    kind: ScoreKind,
    values: Vec<f64>,
}

impl ScoreVector {
    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[cfg(test)]
    pub(crate) fn test_new(values: Vec<f64>) -> Self {
        ScoreVector { kind: ScoreKind::Copeland, values }
    }
}

/// Normalized Copeland scores: `values[i]` is the fraction (out of `K - 1`)
/// of other arms that arm `i` strictly beats. Ties at exactly 0.5 count as
/// zero.
pub fn copeland_scores(pm: &PreferenceMatrix) -> ScoreVector {
    let k = pm.k();
    let values = (0..k)
        .map(|i| {
            let beats = (0..k).filter(|&j| j != i && pm.prob(i, j) > 0.5).count();
            beats as f64 / (k - 1) as f64
        })
        .collect();
    ScoreVector { kind: ScoreKind::Copeland, values }
}

/// Borda scores: `values[i] = (1/K) sum_j p[i][j]`, self term included.
pub fn borda_scores(pm: &PreferenceMatrix) -> ScoreVector {
    let k = pm.k();
    let values = (0..k)
        .map(|i| (0..k).map(|j| pm.prob(i, j)).sum::<f64>() / k as f64)
        .collect();
    ScoreVector { kind: ScoreKind::Borda, values }
}

/// Whether the winner under a raw criterion is its argmax or argmin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

/// A raw per-arm score function together with its known range, to be mapped
/// affinely onto `[0, 1]` so the winner becomes the argmax.
#[derive(Debug, Clone)]
pub struct NormalizationSpec {
    pub raw: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub direction: Direction,
}

/// Maps raw scores onto `[0, 1]`. For `Maximize` the winner keeps the
/// argmax; for `Minimize` the argmin of the raw scores becomes the argmax
/// of the output.
pub fn normalize_scores(spec: &NormalizationSpec) -> Result<ScoreVector> {
    if !(spec.alpha < spec.beta) {
        return Err(Error::InvalidBounds { alpha: spec.alpha, beta: spec.beta });
    }
    for (i, &v) in spec.raw.iter().enumerate() {
        if !(spec.alpha..=spec.beta).contains(&v) {
            return Err(Error::ScoreOutOfBounds {
                i,
                value: v,
                alpha: spec.alpha,
                beta: spec.beta,
            });
        }
    }
    let span = spec.beta - spec.alpha;
    let values = spec
        .raw
        .iter()
        .map(|&v| match spec.direction {
            Direction::Maximize => (v - spec.alpha) / span,
            Direction::Minimize => (spec.beta - v) / span,
        })
        .collect();
    Ok(ScoreVector { kind: ScoreKind::NormalizedCustom, values })
}

/// Argmax of a score vector if it is attained exactly once; `None` when the
/// maximum is tied. Comparison is on exact values.
pub fn unique_winner(scores: &ScoreVector) -> Option<usize> {
    let values = scores.values();
    let mut best = 0usize;
    let mut count = 1usize;
    for i in 1..values.len() {
        if values[i] > values[best] {
            best = i;
            count = 1;
        } else if values[i] == values[best] {
            count += 1;
        }
    }
    if count == 1 {
        Some(best)
    } else {
        None
    }
}

/// Draws a random instance: upper-triangle entries i.i.d. Uniform[0,1),
/// mirrored, diagonal 0.5. The whole matrix is redrawn until the Copeland
/// winner is unique, the gap between the top two Copeland scores is at
/// least `min_gap`, and no off-diagonal entry falls within 1e-9 of 0.5.
pub fn generate_random_instance(k: usize, seed: u64, min_gap: f64) -> Result<PreferenceMatrix> {
    generate_random_instance_with_budget(k, seed, min_gap, DEFAULT_REJECTION_BUDGET)
}

pub fn generate_random_instance_with_budget(
    k: usize,
    seed: u64,
    min_gap: f64,
    budget: usize,
) -> Result<PreferenceMatrix> {
    if k < 3 {
        return Err(Error::TooFewArms { k, min: 3 });
    }
    if !(0.0..1.0).contains(&min_gap) {
        return Err(Error::Config(format!("min_gap must be in [0, 1), got {min_gap}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..budget {
        let mut p = vec![0.5; k * k];
        for i in 0..k {
            for j in (i + 1)..k {
                let v: f64 = rng.random();
                if (v - 0.5).abs() < HALF_EXCLUSION {
                    continue 'attempt;
                }
                p[i * k + j] = v;
                p[j * k + i] = 1.0 - v;
            }
        }
        let pm = PreferenceMatrix { k, p };
        let scores = copeland_scores(&pm);
        if unique_winner(&scores).is_none() {
            continue;
        }
        let mut sorted = scores.values().to_vec();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if sorted[0] - sorted[1] < min_gap {
            continue;
        }
        return Ok(pm);
    }
    Err(Error::RejectionBudgetExhausted { attempts: budget, k, min_gap })
}
