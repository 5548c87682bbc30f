//! Newline-delimited JSON record log and replay verification.
//!
//! A log holds one `header` line with the full config, one `proposition`
//! line per closed proposition, one `repetition` line per repetition with
//! the final reputations, and a closing `metrics` line. Field order is
//! fixed, so re-running the header's config must reproduce the log byte for
//! byte.

use std::path::Path;

use deepthought_core::Verdict;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::experiment::{run_experiment, AgentReputation, ExperimentResult, PropositionRecord, RepetitionRecord};
use crate::metrics::RunMetrics;
use crate::SimError;

pub const LOG_FORMAT: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum LogRecord {
    Header {
        format: u32,
        adversarial_users: usize,
        config: ExperimentConfig,
    },
    Proposition {
        repetition: usize,
        index: usize,
        outcome: Verdict,
        corrupted: bool,
    },
    Repetition {
        repetition: usize,
        seed: u64,
        target: usize,
        target_corrupted: bool,
        corrupted: usize,
        final_reputations: Option<Vec<AgentReputation>>,
    },
    Metrics {
        metrics: RunMetrics,
    },
}

pub fn records(result: &ExperimentResult) -> Vec<LogRecord> {
    let mut out = vec![LogRecord::Header {
        format: LOG_FORMAT,
        adversarial_users: result.adversarial_users,
        config: result.config.clone(),
    }];
    for r in &result.repetitions {
        out.extend(r.propositions.iter().map(|p| LogRecord::Proposition {
            repetition: r.repetition,
            index: p.index,
            outcome: p.outcome,
            corrupted: p.corrupted,
        }));
        out.push(LogRecord::Repetition {
            repetition: r.repetition,
            seed: r.seed,
            target: r.target,
            target_corrupted: r.target_corrupted,
            corrupted: r.corrupted,
            final_reputations: r.final_reputations.clone(),
        });
    }
    out.push(LogRecord::Metrics { metrics: result.metrics });
    out
}

pub fn to_ndjson(result: &ExperimentResult) -> String {
    let mut s = String::new();
    for r in records(result) {
        s.push_str(&serde_json::to_string(&r).expect("records always serialize"));
        s.push('\n');
    }
    s
}

pub fn parse_log(text: &str) -> Result<Vec<LogRecord>, SimError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| SimError::Log {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Rebuilds an experiment result from its records and runs the metric
/// self-audit on it.
pub fn from_records(records: &[LogRecord]) -> Result<ExperimentResult, SimError> {
    let malformed = |line: usize, message: &str| SimError::Log {
        line,
        message: message.to_string(),
    };
    let Some(LogRecord::Header { config, adversarial_users, .. }) = records.first() else {
        return Err(malformed(1, "log must start with a header record"));
    };
    let mut repetitions = Vec::new();
    let mut propositions = Vec::new();
    let mut metrics = None;
    for (i, r) in records.iter().enumerate().skip(1) {
        match r {
            LogRecord::Header { .. } => return Err(malformed(i + 1, "duplicate header")),
            LogRecord::Proposition { index, outcome, corrupted, .. } => propositions.push(PropositionRecord {
                index: *index,
                outcome: *outcome,
                corrupted: *corrupted,
            }),
            LogRecord::Repetition {
                repetition,
                seed,
                target,
                target_corrupted,
                corrupted,
                final_reputations,
            } => repetitions.push(RepetitionRecord {
                repetition: *repetition,
                seed: *seed,
                target: *target,
                target_corrupted: *target_corrupted,
                corrupted: *corrupted,
                propositions: std::mem::take(&mut propositions),
                final_reputations: final_reputations.clone(),
            }),
            LogRecord::Metrics { metrics: m } => metrics = Some(*m),
        }
    }
    let metrics = metrics.ok_or_else(|| malformed(records.len(), "log has no metrics record"))?;
    let result = ExperimentResult {
        config: config.clone(),
        adversarial_users: *adversarial_users,
        metrics,
        repetitions,
    };
    result.audit()?;
    Ok(result)
}

pub fn write_log(path: &Path, result: &ExperimentResult) -> Result<(), SimError> {
    std::fs::write(path, to_ndjson(result)).map_err(|source| SimError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Re-runs the config recorded in `log` and compares the regenerated log
/// line by line. Returns the number of lines checked.
pub fn replay(log: &str, jobs: Option<usize>) -> Result<usize, SimError> {
    let parsed = parse_log(log)?;
    let Some(LogRecord::Header { config, .. }) = parsed.first() else {
        return Err(SimError::Log {
            line: 1,
            message: "log must start with a header record".into(),
        });
    };
    let fresh = to_ndjson(&run_experiment(config, jobs)?);
    let mut old = log.lines();
    let mut new = fresh.lines();
    let mut line = 0;
    loop {
        line += 1;
        match (old.next(), new.next()) {
            (None, None) => return Ok(line - 1),
            (a, b) if a == b => {}
            (a, b) => {
                return Err(SimError::MismatchDetected {
                    line,
                    recorded: a.unwrap_or("<end of log>").to_string(),
                    replayed: b.unwrap_or("<end of log>").to_string(),
                })
            }
        }
    }
}
