//! Reward pools, settlement, and reputation updates at proposition close.
//!
//! Token amounts are integers. The reward formulas are evaluated in real
//! arithmetic and every payout is rounded down; the dust stays in the lost
//! reward pool so that each settlement balances to the token.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::ProtocolParams;
use crate::scoring::Scoreboard;
use crate::types::{ActorKind, PropositionId, UserId, Verdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EconomyError {
    #[error("{name} = {value} is outside the domain of the function")]
    Domain { name: &'static str, value: f64 },
    #[error("settlement of {proposition} does not balance: credits {credits} != debits {debits}")]
    InternalAccountingMismatch {
        proposition: PropositionId,
        credits: u64,
        debits: u64,
    },
    #[error("lost reward pool holds {available}, cannot pay {requested}")]
    PoolExhausted { available: u64, requested: u64 },
}

fn domain(name: &'static str, value: f64) -> EconomyError {
    EconomyError::Domain { name, value }
}

/// Voter reward `[βs² + (1−β)s]·√r`, super-linear in stake. Inclusive of the
/// returned stake.
pub fn voter_reward(stake: f64, reputation: u32, beta: f64) -> Result<f64, EconomyError> {
    if !(stake > 0.0 && stake.is_finite()) {
        return Err(domain("stake", stake));
    }
    if reputation == 0 {
        return Err(domain("reputation", 0.0));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(domain("beta", beta));
    }
    Ok((beta * stake * stake + (1.0 - beta) * stake) * f64::from(reputation).sqrt())
}

/// Certifier reward `s + R/(P+1) · s/s̄`: the stake back plus a stake-weighted
/// share of `1/(P+1)` of the lost reward pool.
pub fn certifier_reward(
    stake: f64,
    lost_pool: f64,
    open_propositions: usize,
    winning_stake: f64,
) -> Result<f64, EconomyError> {
    if !(stake > 0.0 && stake.is_finite()) {
        return Err(domain("stake", stake));
    }
    if winning_stake.is_nan() || winning_stake < stake {
        return Err(domain("winning_stake", winning_stake));
    }
    if lost_pool.is_nan() || lost_pool < 0.0 {
        return Err(domain("lost_pool", lost_pool));
    }
    Ok(stake + lost_pool / (open_propositions as f64 + 1.0) * (stake / winning_stake))
}

/// Bounty plus voter stakes escrowed by one proposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VotersRewardPool {
    pub proposition: PropositionId,
    pub amount: u64,
}

/// Global pool fed by forfeitures and settlement residue; funds certifiers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LostRewardPool {
    amount: u64,
}

impl LostRewardPool {
    pub fn new(amount: u64) -> Self {
        Self { amount }
    }

    pub fn amount(&self) -> u64 {
        self.amount
    }

    pub fn credit(&mut self, amount: u64) {
        self.amount += amount;
    }

    pub fn debit(&mut self, amount: u64) -> Result<(), EconomyError> {
        if amount > self.amount {
            return Err(EconomyError::PoolExhausted {
                available: self.amount,
                requested: amount,
            });
        }
        self.amount -= amount;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Payment {
    pub actor: UserId,
    pub amount: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForfeitReason {
    /// The commitment was never opened.
    Unrevealed,
    /// A certifier whose vote disagreed with a decided outcome.
    LosingCertifier,
    /// Any certifier stake on an `Unknown` outcome.
    UnknownOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forfeit {
    pub actor: UserId,
    pub kind: ActorKind,
    pub amount: u64,
    pub reason: ForfeitReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReputationDelta {
    pub actor: UserId,
    pub kind: ActorKind,
    pub before: u32,
    pub after: u32,
}

impl ReputationDelta {
    /// Applied change after clamping: −1, 0 or +1.
    pub fn delta(&self) -> i64 {
        i64::from(self.after) - i64::from(self.before)
    }
}

/// A revealed certifier ballot with its stake.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifierBallot {
    pub actor: UserId,
    pub vote: bool,
    pub stake: u64,
}

/// A commitment that was never revealed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnrevealedStake {
    pub actor: UserId,
    pub kind: ActorKind,
    pub stake: u64,
}

pub struct SettlementInput<'a> {
    pub proposition: PropositionId,
    pub outcome: Verdict,
    pub bounty: u64,
    pub params: &'a ProtocolParams,
    /// Revealed voter ballots, ranked.
    pub scoreboard: &'a Scoreboard,
    pub certifiers: &'a [CertifierBallot],
    pub unrevealed: &'a [UnrevealedStake],
    /// Length of the available-propositions list at settlement time.
    pub open_propositions: usize,
}

/// Every token movement caused by closing one proposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettlementReport {
    pub proposition: PropositionId,
    pub outcome: Verdict,
    /// Voters reward pool before settlement: bounty plus every voter stake.
    pub voter_pool: u64,
    /// Sum of certifier stakes held for the proposition.
    pub certifier_escrow: u64,
    pub paid_voters: Vec<Payment>,
    /// Voter stakes returned without reward on an `Unknown` outcome.
    pub refunded_voters: Vec<Payment>,
    /// Certifier payouts, stake included.
    pub paid_certifiers: Vec<Payment>,
    pub forfeited: Vec<Forfeit>,
    /// Voter pool residue moved to the lost reward pool.
    pub remainder_to_lost_pool: u64,
    /// Certifier bonuses drawn from the lost reward pool.
    pub lost_pool_debit: u64,
    pub reputation_deltas: Vec<ReputationDelta>,
}

impl SettlementReport {
    fn sum(p: &[Payment]) -> u64 {
        p.iter().map(|p| p.amount).sum()
    }

    /// Tokens leaving the settlement: payouts, refunds, forfeits and residue.
    pub fn credits(&self) -> u64 {
        Self::sum(&self.paid_voters)
            + Self::sum(&self.refunded_voters)
            + Self::sum(&self.paid_certifiers)
            + self.forfeited.iter().map(|f| f.amount).sum::<u64>()
            + self.remainder_to_lost_pool
    }

    /// Tokens entering the settlement: both escrows and the lost-pool debit.
    pub fn debits(&self) -> u64 {
        self.voter_pool + self.certifier_escrow + self.lost_pool_debit
    }

    pub fn is_balanced(&self) -> bool {
        self.credits() == self.debits()
    }

    /// Net change of the lost reward pool caused by this settlement.
    pub fn lost_pool_change(&self) -> i128 {
        let credited: u64 = self.remainder_to_lost_pool + self.forfeited.iter().map(|f| f.amount).sum::<u64>();
        i128::from(credited) - i128::from(self.lost_pool_debit)
    }
}

/// Number of top scoreboard positions eligible for a reward, `⌈x·n⌉`.
pub fn reward_candidates(reward_fraction: f64, revealed: usize) -> usize {
    // guard against products like 0.3 * 10 = 3.0000000000000004
    let raw = reward_fraction * revealed as f64 - 1e-9;
    (raw.ceil().max(0.0) as usize).min(revealed)
}

/// Distributes one proposition's escrows.
///
/// Decided outcome: the top `⌈x·K⌉` scoreboard ballots are candidates; a
/// candidate whose vote matches the outcome is owed `⌊g_v(s, r)⌋`, paid from
/// the voters reward pool in rank order until a payout no longer fits, at
/// which point it and every lower candidate get nothing. The residue goes to
/// the lost reward pool. Winning certifiers then receive `⌊g_c⌋`; losing
/// certifiers forfeit their stake.
///
/// `Unknown` outcome: revealed voter stakes are refunded, the bounty moves to
/// the lost reward pool, and every certifier stake is forfeited.
///
/// Unrevealed stakes are always forfeited. `lost_pool` is only updated if the
/// report balances.
pub fn settle(input: &SettlementInput<'_>, lost_pool: &mut LostRewardPool) -> Result<SettlementReport, EconomyError> {
    let params = input.params;
    let entries = input.scoreboard.entries();
    let revealed_voter_stakes: u64 = entries.iter().map(|e| e.stake).sum();
    let unrevealed_voter_stakes: u64 = input
        .unrevealed
        .iter()
        .filter(|u| u.kind == ActorKind::Voter)
        .map(|u| u.stake)
        .sum();
    let certifier_escrow: u64 = input.certifiers.iter().map(|c| c.stake).sum::<u64>()
        + input
            .unrevealed
            .iter()
            .filter(|u| u.kind == ActorKind::Certifier)
            .map(|u| u.stake)
            .sum::<u64>();

    let mut report = SettlementReport {
        proposition: input.proposition,
        outcome: input.outcome,
        voter_pool: input.bounty + revealed_voter_stakes + unrevealed_voter_stakes,
        certifier_escrow,
        paid_voters: Vec::new(),
        refunded_voters: Vec::new(),
        paid_certifiers: Vec::new(),
        forfeited: input
            .unrevealed
            .iter()
            .map(|u| Forfeit {
                actor: u.actor,
                kind: u.kind,
                amount: u.stake,
                reason: ForfeitReason::Unrevealed,
            })
            .collect(),
        remainder_to_lost_pool: 0,
        lost_pool_debit: 0,
        reputation_deltas: Vec::new(),
    };

    let mut pool = *lost_pool;
    match input.outcome.as_bool() {
        None => {
            report.refunded_voters = entries
                .iter()
                .map(|e| Payment {
                    actor: e.voter,
                    amount: e.stake,
                })
                .collect();
            report.remainder_to_lost_pool = input.bounty;
            report.forfeited.extend(input.certifiers.iter().map(|c| Forfeit {
                actor: c.actor,
                kind: ActorKind::Certifier,
                amount: c.stake,
                reason: ForfeitReason::UnknownOutcome,
            }));
            pool.credit(report.remainder_to_lost_pool + unrevealed_and_certifier_forfeits(&report));
        }
        Some(truth) => {
            let mut available = input.bounty + revealed_voter_stakes;
            let candidates = reward_candidates(params.reward_fraction, entries.len());
            for e in entries.iter().take(candidates) {
                if e.vote != truth {
                    continue;
                }
                let owed = voter_reward(e.stake as f64, e.reputation, params.beta)?.floor() as u64;
                if owed > available {
                    break;
                }
                available -= owed;
                report.paid_voters.push(Payment {
                    actor: e.voter,
                    amount: owed,
                });
            }
            report.remainder_to_lost_pool = available;

            report.forfeited.extend(input.certifiers.iter().filter(|c| c.vote != truth).map(|c| Forfeit {
                actor: c.actor,
                kind: ActorKind::Certifier,
                amount: c.stake,
                reason: ForfeitReason::LosingCertifier,
            }));
            pool.credit(report.remainder_to_lost_pool + unrevealed_and_certifier_forfeits(&report));

            let winners: Vec<&CertifierBallot> = input.certifiers.iter().filter(|c| c.vote == truth).collect();
            let winning_stake: u64 = winners.iter().map(|c| c.stake).sum();
            let reserve = pool.amount() as f64;
            for c in winners {
                let reward = certifier_reward(c.stake as f64, reserve, input.open_propositions, winning_stake as f64)?;
                let bonus = (reward.floor() as u64).saturating_sub(c.stake);
                pool.debit(bonus)?;
                report.lost_pool_debit += bonus;
                report.paid_certifiers.push(Payment {
                    actor: c.actor,
                    amount: c.stake + bonus,
                });
            }
        }
    }

    if !report.is_balanced() {
        return Err(EconomyError::InternalAccountingMismatch {
            proposition: input.proposition,
            credits: report.credits(),
            debits: report.debits(),
        });
    }
    *lost_pool = pool;
    Ok(report)
}

fn unrevealed_and_certifier_forfeits(report: &SettlementReport) -> u64 {
    report.forfeited.iter().map(|f| f.amount).sum()
}

/// One actor's participation in a closed proposition, for reputation updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Participation {
    pub actor: UserId,
    pub kind: ActorKind,
    pub reputation: u32,
    /// Aggregated stance for voters, the revealed vote for certifiers, or
    /// `None` if nothing was revealed.
    pub stance: Option<Verdict>,
}

/// Reputation changes for every participant.
///
/// Decided outcome: a matching stance gains one point, a contrary stance or a
/// missing reveal loses one, and a tied voter stance is left alone.
/// `Unknown` outcome: voters are unchanged and every certifier loses one.
/// Results are clamped to `[1, max_reputation]`.
pub fn update_reputations(outcome: Verdict, participants: &[Participation], max_reputation: u32) -> Vec<ReputationDelta> {
    participants
        .iter()
        .map(|p| {
            let step: i64 = match (outcome, p.kind) {
                (Verdict::Unknown, ActorKind::Voter) => 0,
                (Verdict::Unknown, ActorKind::Certifier) => -1,
                (decided, _) => match p.stance {
                    Some(Verdict::Unknown) => 0,
                    Some(s) if s == decided => 1,
                    _ => -1,
                },
            };
            let after = (i64::from(p.reputation) + step).clamp(1, i64::from(max_reputation.max(1)));
            ReputationDelta {
                actor: p.actor,
                kind: p.kind,
                before: p.reputation,
                after: after as u32,
            }
        })
        .collect()
}
