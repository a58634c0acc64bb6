use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid weighting function: {0}")]
    InvalidWeighting(String),

    #[error("invalid utility function: {0}")]
    InvalidUtility(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("distribution is sub-normalized (total mass {total_mass}); a proper law is required")]
    SubNormalized { total_mass: f64 },

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("sample batch is empty")]
    EmptyBatch,

    #[error("sample {index} is not finite ({value})")]
    NonFiniteSample { index: usize, value: f64 },

    #[error("invalid study parameters: {0}")]
    InvalidStudy(String),

    #[error("sampler exposes no ground-truth law")]
    MissingGroundTruth,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid action mix at state {state}: {reason}")]
    InvalidMix { state: usize, reason: String },

    #[error("state {0} is the absorbing state")]
    AbsorbingState(usize),

    #[error("operation requires {expected} mode")]
    WrongMode { expected: &'static str },

    #[error("value function has {got} entries, model has {expected} states")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("value function entry {index} is not finite")]
    NonFiniteValue { index: usize },

    #[error("the Bellman operators use reference point 0, got {0}")]
    NonzeroReference(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("condition violated ({condition}): {detail}")]
    ConditionViolated { condition: &'static str, detail: String },

    #[error("model is not uniformly transient: non-absorption sum still growing by {increment} after {horizon} steps")]
    NotUniformlyTransient { horizon: usize, increment: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}
