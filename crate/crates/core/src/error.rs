//! Error types shared across the solver and harness.

use thiserror::Error;

/// One problem found while validating a parsed run configuration.
///
/// Validation collects every error it finds (with the source line where the
/// offending value was written) instead of stopping at the first one.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line number in the config text, 0 when no line applies
    /// (e.g. a required key that is missing entirely).
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(f, "{}", self.message)
        }
    }
}

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid error: {0}")]
    Grid(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("initial data error: {0}")]
    Data(String),

    #[error("dyadic block error: {0}")]
    Block(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("non-finite value at t = {t}, step {step}: {what}")]
    NonFinite { t: f64, step: u64, what: String },

    #[error("config errors:\n{}", format_config_errors(.0))]
    Config(Vec<ConfigError>),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("experiment error: {0}")]
    Experiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_config_errors(errors: &[ConfigError]) -> String {
    errors
        .iter()
        .map(|e| format!("  {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;
