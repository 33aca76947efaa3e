use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// Inconsistent or invalid configuration (dimensions, bindings, roster).
    #[error("configuration error: {0}")]
    Config(String),

    /// A value violated a documented range invariant.
    #[error("value out of range for `{key}`: {value} violates `{invariant}`")]
    Range {
        key: String,
        value: String,
        invariant: String,
    },

    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("unknown key `{key}` at line {line}")]
    UnknownKey { key: String, line: usize },

    #[error("non-finite value in field at cell ({x}, {y})")]
    NonFinite { x: usize, y: usize },

    #[error("evaluation time {now} precedes source birth time {birth}")]
    TemporalOrder { now: f64, birth: f64 },

    #[error("position ({x}, {y}) lies outside the arena")]
    OutOfBounds { x: f64, y: f64 },

    #[error("unknown robot id {0}")]
    UnknownRobot(u32),

    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn range(key: &str, value: impl ToString, invariant: &str) -> Self {
        Error::Range {
            key: key.to_string(),
            value: value.to_string(),
            invariant: invariant.to_string(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by user-supplied configuration rather than runtime failure.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Range { .. }
                | Error::Syntax { .. }
                | Error::UnknownKey { .. }
                | Error::ScenarioMismatch(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
