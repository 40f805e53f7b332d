//! Crate-wide error type and result alias.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("{players} players exceed the exact-enumeration limit of {limit}")]
    Complexity { players: usize, limit: usize },

    #[error("dataset eliminated by filtering: last surviving counts were {users} users, {items} items")]
    Eliminated { users: usize, items: usize },

    #[error("bad container: {0}")]
    Container(String),

    #[error("audit failed: max |phi_net - phi_oracle| = {max_dev:.3e} exceeds {tolerance:.1e}")]
    AuditFailed { max_dev: f64, tolerance: f64 },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 2 for usage/config problems, 3 for a
    /// failed audit, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::AuditFailed { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
