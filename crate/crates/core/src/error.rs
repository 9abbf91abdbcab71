// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration or time budget was exhausted.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    /// A configuration file or parameter set could not be used.
    #[error("configuration error: {0}")]
    Config(String),
    /// A proven identity failed to hold; always a bug somewhere.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
