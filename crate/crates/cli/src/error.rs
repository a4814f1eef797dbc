use std::path::Path;

use lctb_core::LctError;
use serde::Serialize;

/// Exit codes: 1 is reserved for failed verifications, which are not errors.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
    #[error(transparent)]
    Lct(#[from] LctError),
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    kind: &'a str,
    message: String,
    exit_code: i32,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Self::Numerical(msg.into())
    }

    pub fn output(path: &Path, e: std::io::Error) -> Self {
        Self::Input(format!("cannot write {}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => 2,
            Self::Numerical(_) => 3,
            Self::Lct(e) if e.is_input_error() => 2,
            Self::Lct(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Input(_) => "input",
            Self::Numerical(_) => "numerical",
            Self::Lct(e) => e.kind(),
        }
    }

    /// One JSON object on one line, for standard error.
    pub fn json_line(&self) -> String {
        let code = self.exit_code();
        let line = ErrorLine {
            error: if code == 2 { "input" } else { "numerical" },
            kind: self.kind(),
            message: self.to_string(),
            exit_code: code,
        };
        serde_json::to_string(&line).expect("plain strings serialize")
    }
}
