use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("preference matrix must be square, got {rows} rows but row {row} has {cols} entries")]
    MatrixNotSquare { rows: usize, row: usize, cols: usize },

    #[error("arm count {k} is below the minimum of {min}")]
    TooFewArms { k: usize, min: usize },

    #[error("entry p[{i}][{j}] = {value} is outside [0, 1]")]
    EntryOutOfRange { i: usize, j: usize, value: f64 },

    #[error("diagonal entry p[{i}][{i}] = {value} differs from 0.5 beyond tolerance")]
    DiagonalNotHalf { i: usize, value: f64 },

    #[error("p[{i}][{j}] + p[{j}][{i}] = {sum} differs from 1 beyond tolerance")]
    NotSkewSymmetric { i: usize, j: usize, sum: f64 },

    #[error("normalization bounds require alpha < beta, got alpha = {alpha}, beta = {beta}")]
    InvalidBounds { alpha: f64, beta: f64 },

    #[error("raw score {value} at arm {i} lies outside [{alpha}, {beta}]")]
    ScoreOutOfBounds { i: usize, value: f64, alpha: f64, beta: f64 },

    #[error(
        "exhausted {attempts} rejection attempts generating a K = {k} instance \
         with min_gap = {min_gap}; the gap is likely infeasible for this arm count"
    )]
    RejectionBudgetExhausted { attempts: usize, k: usize, min_gap: f64 },

    #[error("pair ({i}, {j}) is not a canonical in-range pair for K = {k} (need i <= j < K)")]
    PairOutOfRange { i: usize, j: usize, k: usize },

    #[error("flat index {idx} out of range for {kbar} pairs")]
    IndexOutOfRange { idx: usize, kbar: usize },

    #[error("probability {value} outside [0, 1]")]
    InvalidProbability { value: f64 },

    #[error("pair ({i}, {j}) has never been played; estimates are undefined")]
    UnplayedPair { i: usize, j: usize },

    #[error("arm index {arm} out of range for K = {k}")]
    ArmOutOfRange { arm: usize, k: usize },

    #[error("invalid policy configuration: {0}")]
    PolicyConfig(String),

    #[error("invalid experiment configuration: {0}")]
    Config(String),

    #[error("malformed matrix file {path}: {reason}")]
    MatrixParse { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad user input rather than runtime failure.
    /// The CLI maps these to exit code 2 and everything else to 3.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}
