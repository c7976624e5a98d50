use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported algebra {series}{rank}: {reason}")]
    UnsupportedAlgebra {
        series: String,
        rank: usize,
        reason: String,
    },

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("Laurent degree {degree} exceeds the window W={window}; enlarge the window")]
    WindowOverflow { degree: i64, window: i64 },

    #[error("invalid EFO {s:?}: {reason}")]
    InvalidEfo { s: Vec<u32>, reason: String },

    #[error("invalid grading: {0}")]
    InvalidGrading(String),

    #[error("grading group of order {order} exceeds the solver cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },

    #[error("contraction parameters are not a solution: {0}")]
    NotASolution(String),

    #[error("inconsistent (epsilon, kappa) pair: {0}")]
    InconsistentKappa(String),

    #[error("highest weight {0:?} is not dominant integral")]
    NonDominant(Vec<i64>),

    #[error("depth {depth} exceeds the cap {cap}")]
    DepthTooLarge { depth: u32, cap: u32 },

    #[error("weight (depth {depth}, labels {labels:?}) is not in the weight system")]
    WeightNotInSystem { depth: u32, labels: Vec<i64> },

    #[error("window W={0} too small to certify the generator set; retry with a larger window")]
    Inconclusive(i64),

    #[error("grading group mismatch: {0}")]
    GroupMismatch(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
