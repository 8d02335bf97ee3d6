use std::path::Path;

use crate::text::ParseError;

/// Anything wrong with what the user supplied.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}:{line}:{col}: {message}")]
    Syntax {
        path: String,
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

impl InputError {
    pub fn invalid(msg: impl std::fmt::Display) -> Self {
        InputError::Invalid(msg.to_string())
    }

    pub fn syntax(path: &str, src: &str, e: &ParseError) -> Self {
        let (line, col) = e.line_col(src);
        InputError::Syntax {
            path: path.to_string(),
            line,
            col,
            message: e.message.clone(),
        }
    }

    pub fn json(path: &str, e: &serde_json::Error) -> Self {
        InputError::Syntax {
            path: path.to_string(),
            line: e.line(),
            col: e.column(),
            message: e.to_string(),
        }
    }

    /// Prefixes the message with the field it came from.
    pub fn within(self, field: &str) -> Self {
        match self {
            InputError::Invalid(m) => InputError::Invalid(format!("{field}: {m}")),
            other => other,
        }
    }
}

impl From<cubicwa_core::Error> for InputError {
    fn from(e: cubicwa_core::Error) -> Self {
        InputError::Invalid(e.to_string())
    }
}

pub fn read_file(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}
