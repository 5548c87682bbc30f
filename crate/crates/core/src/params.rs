use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("certifier minimum stake {min_certifier} must exceed voter maximum stake {max_voter}")]
    StakeRangesOverlap { min_certifier: u64, max_voter: u64 },
    #[error("invalid stake range [{min}, {max}]")]
    StakeRange { min: u64, max: u64 },
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("required votes K = {required} exceeds selected slots N = {slots}")]
    RequiredExceedsSlots { required: usize, slots: usize },
    #[error("{0} must be positive")]
    NotPositive(&'static str),
}

/// Deployment-time constants of the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolParams {
    pub min_voter_stake: u64,
    pub max_voter_stake: u64,
    pub min_certifier_stake: u64,
    pub max_certifier_stake: u64,
    /// Weight of the square-root stake term in the vote weight.
    pub alpha: f64,
    /// Weight of the quadratic stake term in the voter reward.
    pub beta: f64,
    pub max_reputation: u32,
    /// N: voter slots drawn per proposition.
    pub voter_slots: usize,
    /// K: voter commitments that conclude the voting phase.
    pub required_votes: usize,
    /// x: fraction of the scoreboard eligible for a reward.
    pub reward_fraction: f64,
    /// Blocks after submission during which certifiers may commit.
    pub certification_window: u64,
    /// Blocks after the reveal phase opens during which reveals are accepted.
    pub reveal_window: u64,
    pub min_bounty: u64,
    /// Balance credited to every newly subscribed account.
    pub starting_balance: u64,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        Self {
            min_voter_stake: 1,
            max_voter_stake: 10,
            min_certifier_stake: 11,
            max_certifier_stake: 20,
            alpha: 0.7,
            beta: 0.5,
            max_reputation: 100,
            voter_slots: 20,
            required_votes: 20,
            reward_fraction: 0.5,
            certification_window: 5,
            reveal_window: 5,
            min_bounty: 1,
            starting_balance: 10_000,
        }
    }
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<(), ParamsError> {
        if self.min_voter_stake == 0 || self.min_voter_stake > self.max_voter_stake {
            return Err(ParamsError::StakeRange {
                min: self.min_voter_stake,
                max: self.max_voter_stake,
            });
        }
        if self.min_certifier_stake > self.max_certifier_stake {
            return Err(ParamsError::StakeRange {
                min: self.min_certifier_stake,
                max: self.max_certifier_stake,
            });
        }
        if self.min_certifier_stake <= self.max_voter_stake {
            return Err(ParamsError::StakeRangesOverlap {
                min_certifier: self.min_certifier_stake,
                max_voter: self.max_voter_stake,
            });
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(ParamsError::OutOfRange {
                name: "alpha",
                value: self.alpha,
                range: "[0, 1]",
            });
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(ParamsError::OutOfRange {
                name: "beta",
                value: self.beta,
                range: "[0, 1]",
            });
        }
        if !(self.reward_fraction > 0.0 && self.reward_fraction < 1.0) {
            return Err(ParamsError::OutOfRange {
                name: "reward_fraction",
                value: self.reward_fraction,
                range: "(0, 1)",
            });
        }
        if self.max_reputation == 0 {
            return Err(ParamsError::NotPositive("max_reputation"));
        }
        if self.voter_slots == 0 {
            return Err(ParamsError::NotPositive("voter_slots"));
        }
        if self.required_votes == 0 {
            return Err(ParamsError::NotPositive("required_votes"));
        }
        if self.required_votes > self.voter_slots {
            return Err(ParamsError::RequiredExceedsSlots {
                required: self.required_votes,
                slots: self.voter_slots,
            });
        }
        if self.min_bounty == 0 {
            return Err(ParamsError::NotPositive("min_bounty"));
        }
        Ok(())
    }

    pub fn voter_stake_range(&self) -> std::ops::RangeInclusive<u64> {
        self.min_voter_stake..=self.max_voter_stake
    }

    pub fn certifier_stake_range(&self) -> std::ops::RangeInclusive<u64> {
        self.min_certifier_stake..=self.max_certifier_stake
    }
}
