use std::path::PathBuf;

use thiserror::Error;

/// Errors from the experiment driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("malformed record at line {line}: {message}")]
    Record { line: u64, message: String },

    /// The tracked threshold range was too small for a trial.
    #[error("trial {trial}: max degree {max_degree} reached kmax {kmax}; rerun with a larger --kmax")]
    Kmax { trial: u64, max_degree: u32, kmax: usize },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: minchoice_core::Error,
    },

    #[error(transparent)]
    Core(#[from] minchoice_core::Error),

    #[error(transparent)]
    Coupling(#[from] minchoice_core::ballsbins::CouplingError),

    #[error("enumeration refused: {0} edges exceeds the limit of {max}", max = crate::enumerate::MAX_ENUMERATE_EDGES)]
    EnumerationTooLarge(u64),

    #[error("nothing to summarize")]
    EmptyInput,

    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl Error {
    /// Short stable identifier for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Csv { .. } => "csv",
            Error::Json { .. } => "json",
            Error::Config(_) => "config",
            Error::Record { .. } => "record",
            Error::Kmax { .. } => "kmax_exceeded",
            Error::Trial { .. } | Error::Core(_) => "model",
            Error::Coupling(_) => "coupling_violation",
            Error::EnumerationTooLarge(_) => "enumeration_too_large",
            Error::EmptyInput => "empty_input",
            Error::Pool(_) => "thread_pool",
        }
    }
}
