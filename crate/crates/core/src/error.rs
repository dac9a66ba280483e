use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (wrong length, index out of range).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Generator or operation parameters out of their valid range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An instance failed one of its structural invariants.
    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    /// Operation invoked on algorithm state that cannot support it.
    #[error("invalid state: {0}")]
    State(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Wraps a TOML decoding failure with `source:line` context.
    pub(crate) fn toml(text: &str, source: &str, e: toml::de::Error) -> Self {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        Error::Parse {
            context: match line {
                Some(l) => format!("{source}:{l}"),
                None => source.to_string(),
            },
            message: e.message().to_string(),
        }
    }

    /// True for errors caused by user-supplied configuration or input, as
    /// opposed to failures while running.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Parameter(_) | Error::Validation(_) | Error::Parse { .. }
        )
    }
}
