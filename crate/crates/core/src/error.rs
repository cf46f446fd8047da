use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every module of the crate.
///
/// Zero denominators are reported as typed variants rather than NaN so that
/// simulation harnesses can count degenerate draws.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate weights: centered weights have zero norm or zero absolute sum")]
    DegenerateWeights,

    #[error("sample variance is zero")]
    ZeroVariance,

    #[error("bootstrapped sample variance is zero")]
    ZeroBootstrapVariance,

    #[error("pivot scale is zero (empirical distribution at 0 or 1)")]
    DegenerateScale,

    #[error("pivot {kind} {requirement}")]
    MuArity {
        kind: &'static str,
        requirement: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("rank (B+1)(1-alpha) = {rank} is not an integer")]
    NonIntegerRank { rank: f64 },

    #[error("inadmissible bound parameters: {0}")]
    InadmissibleParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
