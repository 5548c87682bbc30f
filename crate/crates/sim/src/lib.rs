//! Monte-Carlo driver for corruption-resistance experiments.
//!
//! A population of honest and adversarial voters is run through a sequence
//! of propositions whose ground truth is always TRUE, under either the
//! reputation-weighted oracle or the equal-weight baseline. A proposition
//! whose outcome is not TRUE (including `Unknown`) counts as corrupted.

pub mod agents;
pub mod config;
pub mod experiment;
pub mod metrics;
pub mod records;
pub mod report;

use thiserror::Error;

pub use agents::{adversarial_ballot, honest_ballot, AgentKind, AgentProfile, PredictionPolicy, StakePolicy};
pub use config::{ExperimentConfig, Protocol};
pub use experiment::{run_experiment, ExperimentResult, RepetitionRecord};
pub use metrics::{compute_metrics, RunMetrics};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid experiment configuration: {0}")]
    ConfigInvalid(String),
    #[error("metrics need at least one repetition")]
    EmptyInput,
    #[error(transparent)]
    Engine(#[from] deepthought_core::EngineError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record log at line {line}: {message}")]
    Log { line: usize, message: String },
    #[error("replay mismatch at line {line}: recorded `{recorded}`, replayed `{replayed}`")]
    MismatchDetected {
        line: usize,
        recorded: String,
        replayed: String,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("self-audit failed: {0}")]
    AuditFailed(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}
