//! Equal-weight voting baseline.
//!
//! Every ballot counts once regardless of stake or history. Stakes go into a
//! TRUE pool and a FALSE pool; the winning side splits the losing pool
//! pro-rata by stake. There is no reputation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scoring::combine_outcomes;
use crate::types::{ActorKind, UserId, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineBallot {
    pub actor: UserId,
    pub kind: ActorKind,
    pub vote: bool,
    pub stake: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselinePools {
    pub true_pool: u64,
    pub false_pool: u64,
}

impl BaselinePools {
    pub fn from_ballots(ballots: &[BaselineBallot]) -> Self {
        ballots.iter().fold(Self::default(), |mut p, b| {
            if b.vote {
                p.true_pool += b.stake;
            } else {
                p.false_pool += b.stake;
            }
            p
        })
    }

    pub fn total(&self) -> u64 {
        self.true_pool + self.false_pool
    }
}

fn count_majority<'a>(ballots: impl Iterator<Item = &'a BaselineBallot>) -> Verdict {
    let (t, f) = ballots.fold((0usize, 0usize), |(t, f), b| if b.vote { (t + 1, f) } else { (t, f + 1) });
    match t.cmp(&f) {
        std::cmp::Ordering::Greater => Verdict::True,
        std::cmp::Ordering::Less => Verdict::False,
        std::cmp::Ordering::Equal => Verdict::Unknown,
    }
}

/// Head-count majority of voters, combined with the certifier head-count
/// through the same outcome table as the main protocol.
pub fn baseline_outcome(ballots: &[BaselineBallot]) -> Verdict {
    let voters = count_majority(ballots.iter().filter(|b| b.kind == ActorKind::Voter));
    let certifiers = count_majority(ballots.iter().filter(|b| b.kind == ActorKind::Certifier));
    combine_outcomes(voters, certifiers)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSettlement {
    pub outcome: Verdict,
    pub pools: BaselinePools,
    /// Amount returned to each ballot's owner, stake included, in ballot order.
    /// Losing ballots are absent.
    pub payouts: Vec<(UserId, f64)>,
}

impl BaselineSettlement {
    pub fn total_paid(&self) -> f64 {
        self.payouts.iter().map(|(_, a)| a).sum()
    }
}

/// Winners get their stake back plus a stake-proportional share of the
/// losing pool. `Unknown` returns every stake. Shares are real-valued.
pub fn baseline_settle(ballots: &[BaselineBallot], outcome: Verdict) -> BaselineSettlement {
    let pools = BaselinePools::from_ballots(ballots);
    let payouts = match outcome.as_bool() {
        None => ballots.iter().map(|b| (b.actor, b.stake as f64)).collect(),
        Some(truth) => {
            let (winning, losing) = if truth {
                (pools.true_pool, pools.false_pool)
            } else {
                (pools.false_pool, pools.true_pool)
            };
            ballots
                .iter()
                .filter(|b| b.vote == truth)
                .map(|b| {
                    let share = if winning == 0 {
                        0.0
                    } else {
                        losing as f64 * b.stake as f64 / winning as f64
                    };
                    (b.actor, b.stake as f64 + share)
                })
                .collect()
        }
    };
    BaselineSettlement {
        outcome,
        pools,
        payouts,
    }
}

/// Balances of baseline participants. One writer at a time.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BaselineLedger {
    balances: BTreeMap<UserId, f64>,
    issued: f64,
}

impl BaselineLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn open_account(&mut self, id: UserId, balance: f64) {
        *self.balances.entry(id).or_default() += balance;
        self.issued += balance;
    }

    pub fn balance(&self, id: UserId) -> f64 {
        self.balances.get(&id).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.balances.values().sum()
    }

    pub fn issued(&self) -> f64 {
        self.issued
    }

    /// Escrows every stake, decides, and pays out.
    pub fn play(&mut self, ballots: &[BaselineBallot]) -> BaselineSettlement {
        for b in ballots {
            *self.balances.entry(b.actor).or_default() -= b.stake as f64;
        }
        let settlement = baseline_settle(ballots, baseline_outcome(ballots));
        for &(id, amount) in &settlement.payouts {
            *self.balances.entry(id).or_default() += amount;
        }
        settlement
    }
}
