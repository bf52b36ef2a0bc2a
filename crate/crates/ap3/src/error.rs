//! Error type shared across the crate.

use std::io;

use thiserror::Error;

/// Errors from instance construction, file I/O, and the exact solver.
#[derive(Debug, Error)]
pub enum Ap3Error {
    /// A caller-supplied value violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed instance or solution text.
    #[error("parse error at line {line}, token {token}: {msg}")]
    Parse {
        line: usize,
        token: usize,
        msg: String,
    },

    /// The exhaustive solver refuses instances above its size limit.
    #[error("exact enumeration is limited to n <= {limit}, got n = {n}")]
    TooLargeForExact { n: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Ap3Error>;
