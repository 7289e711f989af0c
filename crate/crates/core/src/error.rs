// SPDX-License-Identifier: Apache-2.0
//! Error type shared by every module.

use thiserror::Error;

/// Failure signals raised by the library.
///
/// Overflow and budget failures are hard errors: no operation ever wraps
/// silently or returns a truncated count.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An exact integer computation left the supported range.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    /// The caller supplied a value outside the operation's domain.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The input is valid in principle but outside what this operation handles.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A factorization or iteration budget was exhausted.
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Overflow(_) | Error::Budget(_) => 2,
            Error::Invalid(_) | Error::Unsupported(_) => 1,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

/// Result alias with [`Error`].
pub type Result<T> = std::result::Result<T, Error>;
