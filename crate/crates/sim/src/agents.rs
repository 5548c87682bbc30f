//! Voting behaviour of simulated participants.

use std::ops::RangeInclusive;

use deepthought_core::RandomSource;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Honest,
    Adversarial,
}

/// How much an agent puts at stake on each ballot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StakePolicy {
    /// Lowest stake the role allows.
    #[default]
    Min,
    /// Highest stake the role allows.
    Max,
    /// Uniform over the role's stake range.
    Uniform,
    /// Always this amount, clamped into the role's range.
    Fixed(u64),
}

impl StakePolicy {
    pub fn stake(self, range: RangeInclusive<u64>, rng: &mut RandomSource) -> u64 {
        let (lo, hi) = range.into_inner();
        match self {
            StakePolicy::Min => lo,
            StakePolicy::Max => hi,
            StakePolicy::Uniform => lo + rng.index((hi - lo + 1) as usize) as u64,
            StakePolicy::Fixed(s) => s.clamp(lo, hi),
        }
    }
}

/// What an adversary reports as the share of TRUE ballots it expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionPolicy {
    /// Predicts that nobody votes TRUE.
    #[default]
    Zero,
    /// Copies the prediction an honest FALSE voter would make.
    Mimic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentProfile {
    pub kind: AgentKind,
    /// Probability in `[0, 1]` that an honest agent votes TRUE on a TRUE
    /// proposition. Also drives the calibrated predictions.
    pub accuracy: f64,
    pub stake: StakePolicy,
    pub prediction: PredictionPolicy,
}

/// One ballot before commitment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ballot {
    pub vote: bool,
    /// Predicted share of TRUE votes, in `[0, 1]`.
    pub prediction: f64,
    pub stake: u64,
}

/// Votes TRUE with probability `accuracy` and predicts the TRUE share a
/// calibrated peer would expect given its own vote.
pub fn honest_ballot(accuracy: f64, stake: u64, rng: &mut RandomSource) -> Ballot {
    let vote = rng.chance(accuracy);
    Ballot {
        vote,
        prediction: if vote { accuracy } else { 1.0 - accuracy },
        stake,
    }
}

/// Always votes FALSE.
pub fn adversarial_ballot(accuracy: f64, policy: PredictionPolicy, stake: u64) -> Ballot {
    Ballot {
        vote: false,
        prediction: match policy {
            PredictionPolicy::Zero => 0.0,
            PredictionPolicy::Mimic => 1.0 - accuracy,
        },
        stake,
    }
}

impl AgentProfile {
    pub fn ballot(&self, stake_range: RangeInclusive<u64>, rng: &mut RandomSource) -> Ballot {
        let stake = self.stake.stake(stake_range, rng);
        match self.kind {
            AgentKind::Honest => honest_ballot(self.accuracy, stake, rng),
            AgentKind::Adversarial => adversarial_ballot(self.accuracy, self.prediction, stake),
        }
    }

    pub fn is_adversarial(&self) -> bool {
        self.kind == AgentKind::Adversarial
    }
}
