use thiserror::Error;

/// Errors for parameter and precondition violations.
///
/// Every variant message states the violated precondition so that callers
/// (in particular the CLI) can surface it verbatim.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("alpha must lie in the open interval (0,1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("gamma must be a positive finite real, got {0}")]
    GammaOutOfRange(f64),
    #[error("u must lie in the open interval (0,1), got {0}")]
    UniformOutOfRange(f64),
    #[error("s must exceed -alpha = {minus_alpha} for the moment to be finite, got s = {s}")]
    MomentDiverges { s: f64, minus_alpha: f64 },
    #[error("rational index requires 1 <= p < n, got p = {p}, n = {n}")]
    BadRationalIndex { p: u32, n: u32 },
    #[error("p must satisfy p >= 1, got {0}")]
    BinomialIndexOutOfRange(f64),
    #[error("x must be a non-negative finite real, got {0}")]
    NegativeArgument(f64),
    #[error("(beta, alpha) = ({beta}, {alpha}) violates beta < alpha and the admissible range {range}")]
    InadmissiblePair {
        beta: f64,
        alpha: f64,
        range: &'static str,
    },
    #[error("grids must share the same knots and lengths")]
    GridMismatch,
    #[error("need at least {need} samples, got {got}")]
    NotEnoughSamples { need: usize, got: usize },
    #[error("unknown sampler id {0:?}")]
    UnknownSampler(String),
    #[error("m_S must lie in the certified bracket (0, 0.22746821155978638], got {0}")]
    MedianSOutOfRange(f64),
    #[error("alphas must be strictly increasing with at least two entries")]
    BadAlphaArray,
    #[error("branch parameters out of range: {0}")]
    BadBranchParams(String),
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
