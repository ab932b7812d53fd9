use std::path::PathBuf;

use serde::Serialize;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("refusing to overwrite {0} (pass --force)")]
    Exists(PathBuf),
    #[error(transparent)]
    Core(#[from] circ_spectra_core::Error),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_capacity() => EXIT_CAPACITY,
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_CAPACITY => "capacity",
            EXIT_NUMERICAL => "numerical",
            _ => "config",
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            code: i32,
            message: String,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        let w = Wrapper {
            error: Body {
                kind: self.kind(),
                code: self.exit_code(),
                message: self.to_string(),
            },
        };
        serde_json::to_string(&w).expect("error body serializes")
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
