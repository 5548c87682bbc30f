//! The proposition lifecycle state machine.
//!
//! A proposition moves `Open → Reveal → Closed` and never backwards:
//!
//! * **Open**: voter slots are drawn at submission. Selected voters commit
//!   digests until `K` commitments arrive; certifiers may commit while the
//!   certification window is open.
//! * **Reveal**: entered once voting has concluded and the certification
//!   window has elapsed. Committed actors open their ballots.
//! * **Closed**: reached through [`Engine::close_proposition`] once every
//!   commitment is revealed or the reveal window has run out. Outcome,
//!   scoreboard, settlement and reputation updates are applied in one step.
//!
//! All mutation goes through `&mut Engine`; the type is `Send` but holds no
//! interior mutability.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::commitment::{ballot_digest, CommitmentError, Digest, Prediction, Salt};
use crate::economy::{
    self, CertifierBallot, EconomyError, LostRewardPool, Participation, SettlementInput, SettlementReport,
    UnrevealedStake,
};
use crate::params::{ParamsError, ProtocolParams};
use crate::rng::RandomSource;
use crate::scoring::{self, BallotView, Scoreboard, ScoringError, SideOutcome};
use crate::types::{ActorKind, Phase, PropositionId, Role, UserId, Verdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("unknown user {0}")]
    UnknownUser(UserId),
    #[error("unknown proposition {0}")]
    UnknownProposition(PropositionId),
    #[error("user {user} is a {actual:?}, expected {expected:?}")]
    WrongRole { user: UserId, expected: Role, actual: Role },
    #[error("user {user} holds {balance} tokens, {required} required")]
    InsufficientBalance { user: UserId, balance: u64, required: u64 },
    #[error("proposition content is empty")]
    EmptyContent,
    #[error("bounty {bounty} is below the minimum {min}")]
    BountyTooSmall { bounty: u64, min: u64 },
    #[error("no voters are registered")]
    NoVotersRegistered,
    #[error("voter slots for {0} were already drawn")]
    SlotsAlreadyDrawn(PropositionId),
    #[error("user {user} holds no unused slot on {proposition}")]
    NotSelected { user: UserId, proposition: PropositionId },
    #[error("stake {stake} outside [{min}, {max}]")]
    StakeOutOfRange { stake: u64, min: u64, max: u64 },
    #[error("voting on {0} is closed")]
    VotingClosed(PropositionId),
    #[error("certification window of {0} is closed")]
    CertificationWindowClosed(PropositionId),
    #[error("certifier {user} already committed on {proposition}")]
    AlreadyCommitted { user: UserId, proposition: PropositionId },
    #[error("user {user} has no unrevealed commitment on {proposition}")]
    NoCommitment { user: UserId, proposition: PropositionId },
    #[error("revealed ballot does not match any commitment of {user} on {proposition}")]
    DigestMismatch { user: UserId, proposition: PropositionId },
    #[error("reveal window of {0} is closed")]
    RevealWindowClosed(PropositionId),
    #[error("operation not allowed on {proposition} in phase {phase:?}")]
    WrongPhase { proposition: PropositionId, phase: Phase },
    #[error("token conservation violated: {0}")]
    InternalAccountingMismatch(String),
    #[error("invalid snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Commitment(#[from] CommitmentError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error(transparent)]
    Economy(#[from] EconomyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserAccount {
    pub id: UserId,
    pub role: Role,
    pub reputation: u32,
    pub balance: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteCommitment {
    pub actor: UserId,
    pub kind: ActorKind,
    pub stake: u64,
    pub digest: Digest,
    pub committed_at: u64,
    pub revealed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevealedVote {
    pub actor: UserId,
    pub kind: ActorKind,
    pub vote: bool,
    /// Present for voters, absent for certifiers.
    pub prediction: Option<Prediction>,
    pub salt: Salt,
    pub stake: u64,
    pub revealed_at: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proposition {
    pub id: PropositionId,
    pub content: String,
    pub bounty: u64,
    pub submitter: UserId,
    pub phase: Phase,
    pub created_at: u64,
    /// Voter draws, with repetition.
    pub selected_slots: Vec<UserId>,
    pub consumed_slots: Vec<bool>,
    pub voter_commitments: Vec<VoteCommitment>,
    pub certifier_commitments: Vec<VoteCommitment>,
    /// Reveals in arrival order.
    pub revealed: Vec<RevealedVote>,
    pub voting_concluded_at: Option<u64>,
    pub reveal_opened_at: Option<u64>,
    pub closed_at: Option<u64>,
    /// Bounty plus voter stakes held until settlement.
    pub voters_pool: u64,
    pub certifier_escrow: u64,
    /// `None` while pending.
    pub outcome: Option<Verdict>,
    pub voters_side: Option<SideOutcome>,
    pub certifiers_side: Option<SideOutcome>,
    pub scoreboard: Option<Scoreboard>,
    pub settlement: Option<SettlementReport>,
}

impl Proposition {
    pub fn voting_concluded(&self) -> bool {
        self.voting_concluded_at.is_some()
    }

    /// Last block at which a certifier may commit.
    pub fn certification_deadline(&self, params: &ProtocolParams) -> u64 {
        self.created_at + params.certification_window
    }

    /// Last block at which a reveal is accepted, once the reveal phase is open.
    pub fn reveal_deadline(&self, params: &ProtocolParams) -> Option<u64> {
        self.reveal_opened_at.map(|b| b + params.reveal_window)
    }

    fn commitments(&self) -> impl Iterator<Item = &VoteCommitment> {
        self.voter_commitments.iter().chain(self.certifier_commitments.iter())
    }

    pub fn all_revealed(&self) -> bool {
        self.commitments().all(|c| c.revealed)
    }

    /// Tokens currently escrowed by this proposition.
    pub fn escrowed(&self) -> u64 {
        self.voters_pool + self.certifier_escrow
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Engine {
    params: ProtocolParams,
    block: u64,
    users: Vec<UserAccount>,
    voters: Vec<UserId>,
    propositions: Vec<Proposition>,
    available: Vec<PropositionId>,
    closed: Vec<PropositionId>,
    lost_pool: LostRewardPool,
    rng: RandomSource,
    /// Total tokens issued through subscriptions.
    minted: u64,
}

impl Engine {
    pub fn new(params: ProtocolParams, seed: u64) -> Result<Self, EngineError> {
        Self::with_rng(params, RandomSource::new(seed))
    }

    pub fn with_rng(params: ProtocolParams, rng: RandomSource) -> Result<Self, EngineError> {
        params.validate()?;
        Ok(Self {
            params,
            block: 0,
            users: Vec::new(),
            voters: Vec::new(),
            propositions: Vec::new(),
            available: Vec::new(),
            closed: Vec::new(),
            lost_pool: LostRewardPool::default(),
            rng,
            minted: 0,
        })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn block(&self) -> u64 {
        self.block
    }

    pub fn user(&self, id: UserId) -> Option<&UserAccount> {
        self.users.get(id.0 as usize)
    }

    pub fn users(&self) -> &[UserAccount] {
        &self.users
    }

    pub fn proposition(&self, id: PropositionId) -> Option<&Proposition> {
        self.propositions.get(id.0 as usize)
    }

    pub fn available(&self) -> &[PropositionId] {
        &self.available
    }

    pub fn closed(&self) -> &[PropositionId] {
        &self.closed
    }

    pub fn lost_pool(&self) -> u64 {
        self.lost_pool.amount()
    }

    pub fn minted(&self) -> u64 {
        self.minted
    }

    /// Balances plus escrows plus the lost reward pool.
    pub fn total_tokens(&self) -> u64 {
        let balances: u64 = self.users.iter().map(|u| u.balance).sum();
        let escrow: u64 = self.propositions.iter().map(|p| p.escrowed()).sum();
        balances + escrow + self.lost_pool.amount()
    }

    /// Checks that no tokens were created or destroyed since genesis.
    pub fn audit(&self) -> Result<(), EngineError> {
        let total = self.total_tokens();
        if total != self.minted {
            return Err(EngineError::InternalAccountingMismatch(format!(
                "{total} tokens in circulation, {} issued",
                self.minted
            )));
        }
        Ok(())
    }

    pub fn subscribe(&mut self, role: Role) -> UserAccount {
        let account = UserAccount {
            id: UserId(self.users.len() as u64),
            role,
            reputation: 1,
            balance: self.params.starting_balance,
        };
        if role == Role::Voter {
            self.voters.push(account.id);
        }
        self.minted += account.balance;
        self.users.push(account.clone());
        account
    }

    /// Advances logical time and opens reveal phases whose conditions are met.
    pub fn advance_block(&mut self, blocks: u64) {
        self.block += blocks;
        let (block, window) = (self.block, self.params.certification_window);
        for id in &self.available {
            refresh_phase(&mut self.propositions[id.0 as usize], block, window);
        }
    }

    pub fn submit_proposition(
        &mut self,
        submitter: UserId,
        content: &str,
        bounty: u64,
    ) -> Result<PropositionId, EngineError> {
        let user = self.account_with_role(submitter, Role::Submitter)?;
        if content.trim().is_empty() {
            return Err(EngineError::EmptyContent);
        }
        if bounty < self.params.min_bounty {
            return Err(EngineError::BountyTooSmall {
                bounty,
                min: self.params.min_bounty,
            });
        }
        if user.balance < bounty {
            return Err(EngineError::InsufficientBalance {
                user: submitter,
                balance: user.balance,
                required: bounty,
            });
        }
        if self.voters.is_empty() {
            return Err(EngineError::NoVotersRegistered);
        }

        self.users[submitter.0 as usize].balance -= bounty;
        let id = PropositionId(self.propositions.len() as u64);
        self.propositions.push(Proposition {
            id,
            content: content.to_owned(),
            bounty,
            submitter,
            phase: Phase::Open,
            created_at: self.block,
            selected_slots: Vec::new(),
            consumed_slots: Vec::new(),
            voter_commitments: Vec::new(),
            certifier_commitments: Vec::new(),
            revealed: Vec::new(),
            voting_concluded_at: None,
            reveal_opened_at: None,
            closed_at: None,
            voters_pool: bounty,
            certifier_escrow: 0,
            outcome: None,
            voters_side: None,
            certifiers_side: None,
            scoreboard: None,
            settlement: None,
        });
        self.available.push(id);
        self.select_voters(id)?;
        Ok(id)
    }

    /// Draws `N` voter slots uniformly with replacement from the registry.
    pub fn select_voters(&mut self, proposition: PropositionId) -> Result<Vec<UserId>, EngineError> {
        let n = self.params.voter_slots;
        let p = self.propositions.get(proposition.0 as usize).ok_or(EngineError::UnknownProposition(proposition))?;
        if p.phase != Phase::Open {
            return Err(EngineError::WrongPhase {
                proposition,
                phase: p.phase,
            });
        }
        if !p.selected_slots.is_empty() {
            return Err(EngineError::SlotsAlreadyDrawn(proposition));
        }
        if self.voters.is_empty() {
            return Err(EngineError::NoVotersRegistered);
        }
        let slots: Vec<UserId> = (0..n).map(|_| self.voters[self.rng.index(self.voters.len())]).collect();
        let p = &mut self.propositions[proposition.0 as usize];
        p.selected_slots = slots.clone();
        p.consumed_slots = vec![false; n];
        Ok(slots)
    }

    pub fn commit_vote(
        &mut self,
        voter: UserId,
        proposition: PropositionId,
        stake: u64,
        digest: Digest,
    ) -> Result<(), EngineError> {
        let p = self.open_proposition(proposition)?;
        if p.voting_concluded() || p.phase != Phase::Open {
            return Err(EngineError::VotingClosed(proposition));
        }
        let user = self.account_with_role(voter, Role::Voter)?;
        check_stake(stake, self.params.voter_stake_range())?;
        let slot = p
            .selected_slots
            .iter()
            .zip(&p.consumed_slots)
            .position(|(&id, &used)| id == voter && !used)
            .ok_or(EngineError::NotSelected { user: voter, proposition })?;
        if user.balance < stake {
            return Err(EngineError::InsufficientBalance {
                user: voter,
                balance: user.balance,
                required: stake,
            });
        }

        self.users[voter.0 as usize].balance -= stake;
        let (block, k, window) = (self.block, self.params.required_votes, self.params.certification_window);
        let p = &mut self.propositions[proposition.0 as usize];
        p.consumed_slots[slot] = true;
        p.voters_pool += stake;
        p.voter_commitments.push(VoteCommitment {
            actor: voter,
            kind: ActorKind::Voter,
            stake,
            digest,
            committed_at: block,
            revealed: false,
        });
        if p.voter_commitments.len() >= k {
            p.voting_concluded_at = Some(block);
        }
        refresh_phase(p, block, window);
        Ok(())
    }

    pub fn commit_certification(
        &mut self,
        certifier: UserId,
        proposition: PropositionId,
        stake: u64,
        digest: Digest,
    ) -> Result<(), EngineError> {
        let p = self.open_proposition(proposition)?;
        if p.phase != Phase::Open || self.block > p.certification_deadline(&self.params) {
            return Err(EngineError::CertificationWindowClosed(proposition));
        }
        let user = self.account_with_role(certifier, Role::Certifier)?;
        check_stake(stake, self.params.certifier_stake_range())?;
        if p.certifier_commitments.iter().any(|c| c.actor == certifier) {
            return Err(EngineError::AlreadyCommitted {
                user: certifier,
                proposition,
            });
        }
        if user.balance < stake {
            return Err(EngineError::InsufficientBalance {
                user: certifier,
                balance: user.balance,
                required: stake,
            });
        }

        self.users[certifier.0 as usize].balance -= stake;
        let block = self.block;
        let p = &mut self.propositions[proposition.0 as usize];
        p.certifier_escrow += stake;
        p.certifier_commitments.push(VoteCommitment {
            actor: certifier,
            kind: ActorKind::Certifier,
            stake,
            digest,
            committed_at: block,
            revealed: false,
        });
        Ok(())
    }

    /// Opens one of `actor`'s commitments. Voters must supply a prediction,
    /// certifiers must not. A mismatching tuple leaves every commitment
    /// unrevealed.
    pub fn reveal(
        &mut self,
        actor: UserId,
        proposition: PropositionId,
        vote: bool,
        prediction: Option<Prediction>,
        salt: &[u8],
    ) -> Result<(), EngineError> {
        let p = self.open_proposition(proposition)?;
        if p.phase != Phase::Reveal {
            return Err(EngineError::WrongPhase {
                proposition,
                phase: p.phase,
            });
        }
        if p.reveal_deadline(&self.params).is_some_and(|d| self.block > d) {
            return Err(EngineError::RevealWindowClosed(proposition));
        }
        let user = self.user(actor).ok_or(EngineError::UnknownUser(actor))?;
        let kind = match user.role {
            Role::Voter => ActorKind::Voter,
            Role::Certifier => ActorKind::Certifier,
            Role::Submitter => return Err(EngineError::NoCommitment { user: actor, proposition }),
        };
        let commitments = match kind {
            ActorKind::Voter => &p.voter_commitments,
            ActorKind::Certifier => &p.certifier_commitments,
        };
        let mut pending = commitments.iter().enumerate().filter(|(_, c)| c.actor == actor && !c.revealed).peekable();
        if pending.peek().is_none() {
            return Err(EngineError::NoCommitment { user: actor, proposition });
        }
        let well_formed = prediction.is_some() == (kind == ActorKind::Voter);
        let digest = ballot_digest(vote, prediction, salt);
        let index = pending
            .find(|(_, c)| well_formed && c.digest == digest)
            .map(|(i, _)| i)
            .ok_or(EngineError::DigestMismatch { user: actor, proposition })?;

        let block = self.block;
        let p = &mut self.propositions[proposition.0 as usize];
        let commitment = match kind {
            ActorKind::Voter => &mut p.voter_commitments[index],
            ActorKind::Certifier => &mut p.certifier_commitments[index],
        };
        commitment.revealed = true;
        let stake = commitment.stake;
        p.revealed.push(RevealedVote {
            actor,
            kind,
            vote,
            prediction,
            salt: Salt(salt.to_vec()),
            stake,
            revealed_at: block,
        });
        Ok(())
    }

    /// Computes the outcome, builds the scoreboard, settles rewards and
    /// updates reputations. Either every effect is applied or none is.
    pub fn close_proposition(&mut self, proposition: PropositionId) -> Result<Verdict, EngineError> {
        let p = self.open_proposition(proposition)?;
        let reveal_over = p.reveal_deadline(&self.params).is_some_and(|d| self.block > d);
        if p.phase != Phase::Reveal || !(p.all_revealed() || reveal_over) {
            return Err(EngineError::WrongPhase {
                proposition,
                phase: p.phase,
            });
        }

        let reputation = |id: UserId| self.users[id.0 as usize].reputation;
        let alpha = self.params.alpha;

        let mut voter_weights = Vec::new();
        let mut ballots = Vec::new();
        let mut certifier_votes = Vec::new();
        let mut certifiers = Vec::new();
        for r in &p.revealed {
            let rep = reputation(r.actor);
            let weight = scoring::vote_weight(r.stake as f64, rep, alpha)?;
            match r.kind {
                ActorKind::Voter => {
                    voter_weights.push((r.actor, r.vote, weight));
                    ballots.push(BallotView {
                        voter: r.actor,
                        vote: r.vote,
                        prediction: r.prediction.map_or(0.0, Prediction::probability),
                        stake: r.stake,
                        reputation: rep,
                    });
                }
                ActorKind::Certifier => {
                    certifier_votes.push((r.vote, weight));
                    certifiers.push(CertifierBallot {
                        actor: r.actor,
                        vote: r.vote,
                        stake: r.stake,
                    });
                }
            }
        }
        let voters_side = scoring::side_outcome(voter_weights.iter().map(|&(_, v, w)| (v, w)));
        let certifiers_side = scoring::side_outcome(certifier_votes.iter().copied());
        let outcome = scoring::combine_outcomes(voters_side.verdict, certifiers_side.verdict);

        let mut rng = self.rng.clone();
        let scoreboard = scoring::build_scoreboard(&ballots, outcome, &mut rng)?;

        let unrevealed: Vec<UnrevealedStake> = p
            .commitments()
            .filter(|c| !c.revealed)
            .map(|c| UnrevealedStake {
                actor: c.actor,
                kind: c.kind,
                stake: c.stake,
            })
            .collect();

        let mut lost_pool = self.lost_pool;
        let mut report = economy::settle(
            &SettlementInput {
                proposition,
                outcome,
                bounty: p.bounty,
                params: &self.params,
                scoreboard: &scoreboard,
                certifiers: &certifiers,
                unrevealed: &unrevealed,
                open_propositions: self.available.len() - 1,
            },
            &mut lost_pool,
        )?;

        let mut participants: Vec<Participation> = Vec::new();
        for c in &p.voter_commitments {
            if participants.iter().any(|q| q.actor == c.actor) {
                continue;
            }
            let stance = if voter_weights.iter().any(|&(id, _, _)| id == c.actor) {
                Some(scoring::aggregate_voter_stance(c.actor, &voter_weights)?)
            } else {
                None
            };
            participants.push(Participation {
                actor: c.actor,
                kind: ActorKind::Voter,
                reputation: reputation(c.actor),
                stance,
            });
        }
        for c in &p.certifier_commitments {
            let stance = p
                .revealed
                .iter()
                .find(|r| r.kind == ActorKind::Certifier && r.actor == c.actor)
                .map(|r| Verdict::from_vote(r.vote));
            participants.push(Participation {
                actor: c.actor,
                kind: ActorKind::Certifier,
                reputation: reputation(c.actor),
                stance,
            });
        }
        report.reputation_deltas = economy::update_reputations(outcome, &participants, self.params.max_reputation);

        // commit
        for pay in report
            .paid_voters
            .iter()
            .chain(&report.refunded_voters)
            .chain(&report.paid_certifiers)
        {
            self.users[pay.actor.0 as usize].balance += pay.amount;
        }
        for d in &report.reputation_deltas {
            self.users[d.actor.0 as usize].reputation = d.after;
        }
        self.lost_pool = lost_pool;
        self.rng = rng;
        let block = self.block;
        let p = &mut self.propositions[proposition.0 as usize];
        p.phase = Phase::Closed;
        p.closed_at = Some(block);
        p.outcome = Some(outcome);
        p.voters_side = Some(voters_side);
        p.certifiers_side = Some(certifiers_side);
        p.scoreboard = Some(scoreboard);
        p.settlement = Some(report);
        p.voters_pool = 0;
        p.certifier_escrow = 0;
        self.available.retain(|&id| id != proposition);
        self.closed.push(proposition);

        debug_assert_eq!(self.total_tokens(), self.minted);
        Ok(outcome)
    }

    pub fn to_snapshot_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("engine state is always serializable")
    }

    pub fn from_snapshot_json(json: &str) -> Result<Self, EngineError> {
        let engine: Engine = serde_json::from_str(json).map_err(|e| EngineError::Snapshot(e.to_string()))?;
        engine.params.validate()?;
        engine.audit()?;
        Ok(engine)
    }

    fn account_with_role(&self, id: UserId, expected: Role) -> Result<&UserAccount, EngineError> {
        let user = self.user(id).ok_or(EngineError::UnknownUser(id))?;
        if user.role != expected {
            return Err(EngineError::WrongRole {
                user: id,
                expected,
                actual: user.role,
            });
        }
        Ok(user)
    }

    /// A proposition that has not been closed yet.
    fn open_proposition(&self, id: PropositionId) -> Result<&Proposition, EngineError> {
        let p = self.proposition(id).ok_or(EngineError::UnknownProposition(id))?;
        if p.phase == Phase::Closed {
            return Err(EngineError::WrongPhase {
                proposition: id,
                phase: Phase::Closed,
            });
        }
        Ok(p)
    }
}

fn check_stake(stake: u64, range: std::ops::RangeInclusive<u64>) -> Result<(), EngineError> {
    if !range.contains(&stake) {
        return Err(EngineError::StakeOutOfRange {
            stake,
            min: *range.start(),
            max: *range.end(),
        });
    }
    Ok(())
}

fn refresh_phase(p: &mut Proposition, block: u64, certification_window: u64) {
    if p.phase == Phase::Open && p.voting_concluded() && block > p.created_at + certification_window {
        p.phase = Phase::Reveal;
        p.reveal_opened_at = Some(block);
    }
}
