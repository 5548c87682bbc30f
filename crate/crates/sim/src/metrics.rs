//! Corruption metrics over the repetitions of one experiment.

use serde::{Deserialize, Serialize};

use crate::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    /// Percent of repetitions whose target proposition was corrupted.
    pub c_spec: f64,
    /// Mean number of corrupted propositions per repetition.
    pub c_any: f64,
    /// Population standard deviation of the corrupted counts.
    pub std: f64,
    pub min: usize,
    pub max: usize,
    pub repetitions: usize,
}

pub fn compute_metrics(corrupted: &[usize], target_corrupted: &[bool]) -> Result<RunMetrics, SimError> {
    if corrupted.is_empty() {
        return Err(SimError::EmptyInput);
    }
    if corrupted.len() != target_corrupted.len() {
        return Err(SimError::ConfigInvalid(format!(
            "{} corrupted counts but {} target flags",
            corrupted.len(),
            target_corrupted.len()
        )));
    }
    let n = corrupted.len() as f64;
    let mean = corrupted.iter().map(|&c| c as f64).sum::<f64>() / n;
    let var = corrupted.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / n;
    let hits = target_corrupted.iter().filter(|&&t| t).count();
    Ok(RunMetrics {
        c_spec: 100.0 * hits as f64 / n,
        c_any: mean,
        std: var.sqrt(),
        min: *corrupted.iter().min().expect("non-empty"),
        max: *corrupted.iter().max().expect("non-empty"),
        repetitions: corrupted.len(),
    })
}
