use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of a model.
    #[error("domain error: {0}")]
    Domain(String),

    /// A catalog record has the wrong shape.
    #[error("record {record}: {message}")]
    Format { record: usize, message: String },

    /// A catalog field could not be parsed. Columns are 1-based and inclusive.
    #[error("record {record}, columns {start}-{end}: {message}")]
    Field {
        record: usize,
        start: usize,
        end: usize,
        message: String,
    },

    /// A config line could not be parsed.
    #[error("config line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    /// A config parsed but failed validation.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("missing catalog files: {}", display_paths(.0))]
    MissingCatalog(Vec<PathBuf>),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn display_paths(paths: &[PathBuf]) -> String {
    paths
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by the user's configuration text.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::ConfigSyntax { .. } | Error::UnknownKey(_) | Error::InvalidConfig(_)
        )
    }

    /// True for errors caused by missing or malformed input data.
    pub fn is_data(&self) -> bool {
        matches!(
            self,
            Error::Format { .. } | Error::Field { .. } | Error::MissingCatalog(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
