use std::fmt;
use std::path::Path;

use cptdp::Error;

/// A failure reported as `error[kind]: message` on one line.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::new("io", format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = self.message.split_whitespace().collect::<Vec<_>>().join(" ");
        write!(f, "error[{}]: {line}", self.kind)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::Io { .. } => "io",
            Error::Parse(_) => "parse",
            Error::InvalidModel(_)
            | Error::InvalidMix { .. }
            | Error::AbsorbingState(_)
            | Error::DimensionMismatch { .. }
            | Error::NonFiniteValue { .. } => "model",
            Error::InvalidWeighting(_) | Error::InvalidUtility(_) | Error::NonzeroReference(_) => "spec",
            Error::InvalidDistribution(_) | Error::SubNormalized { .. } => "distribution",
            Error::Domain { .. } | Error::InvalidConfig(_) | Error::InvalidStudy(_) | Error::WrongMode { .. } => {
                "config"
            }
            Error::EmptyBatch | Error::NonFiniteSample { .. } | Error::MissingGroundTruth => "estimator",
            Error::QuadratureNonConvergence(_) => "numeric",
            Error::ConditionViolated { .. } | Error::NotUniformlyTransient { .. } => "condition",
        };
        CliError::new(kind, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
