//! Repetition driver for both protocols.

use deepthought_core::astraea::{BaselineBallot, BaselineLedger};
use deepthought_core::commitment::ballot_digest;
use deepthought_core::{ActorKind, Engine, Prediction, RandomSource, Role, UserId, Verdict};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::{AgentKind, AgentProfile, Ballot};
use crate::config::{ExperimentConfig, Protocol, TargetPolicy};
use crate::metrics::{compute_metrics, RunMetrics};
use crate::SimError;

const ENGINE_STREAM: u64 = 0;
const AGENT_STREAM: u64 = 1;
const TARGET_STREAM: u64 = 2;
const SALT_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionRecord {
    /// Submission order within the repetition.
    pub index: usize,
    pub outcome: Verdict,
    pub corrupted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentReputation {
    pub user: UserId,
    pub kind: AgentKind,
    pub reputation: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionRecord {
    pub repetition: usize,
    /// Seed of the repetition's own random source.
    pub seed: u64,
    /// Index of the proposition measured by C-SPEC.
    pub target: usize,
    pub target_corrupted: bool,
    pub corrupted: usize,
    pub propositions: Vec<PropositionRecord>,
    /// Voter reputations at the end of the run. Absent for the baseline,
    /// which has no reputation.
    pub final_reputations: Option<Vec<AgentReputation>>,
}

impl RepetitionRecord {
    /// Mean final reputation of the voters of `kind`, if any exist.
    pub fn mean_reputation(&self, kind: AgentKind) -> Option<f64> {
        let reps: Vec<f64> = self
            .final_reputations
            .as_ref()?
            .iter()
            .filter(|a| a.kind == kind)
            .map(|a| a.reputation as f64)
            .collect();
        (!reps.is_empty()).then(|| reps.iter().sum::<f64>() / reps.len() as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub adversarial_users: usize,
    pub metrics: RunMetrics,
    pub repetitions: Vec<RepetitionRecord>,
}

impl ExperimentResult {
    /// Recomputes every metric from the per-proposition records.
    pub fn audit(&self) -> Result<(), SimError> {
        let fail = |m: String| Err(SimError::AuditFailed(m));
        if self.repetitions.len() != self.config.repetitions {
            return fail(format!("{} repetition records for {} repetitions", self.repetitions.len(), self.config.repetitions));
        }
        for (i, r) in self.repetitions.iter().enumerate() {
            if r.repetition != i || r.propositions.len() != self.config.n_propositions {
                return fail(format!("repetition {i} has malformed records"));
            }
            let counted = r.propositions.iter().filter(|p| p.corrupted).count();
            if counted != r.corrupted {
                return fail(format!("repetition {i}: {counted} corrupted records, {} reported", r.corrupted));
            }
            if r.propositions.iter().any(|p| p.corrupted != (p.outcome != Verdict::True)) {
                return fail(format!("repetition {i}: corrupted flag disagrees with outcome"));
            }
            let target = r.propositions.get(r.target).map(|p| p.corrupted);
            if target != Some(r.target_corrupted) {
                return fail(format!("repetition {i}: target flag disagrees with its record"));
            }
        }
        let again = metrics_of(&self.repetitions)?;
        if again != self.metrics {
            return fail(format!("metrics {:?} do not match recomputation {again:?}", self.metrics));
        }
        Ok(())
    }
}

fn metrics_of(reps: &[RepetitionRecord]) -> Result<RunMetrics, SimError> {
    let counts: Vec<usize> = reps.iter().map(|r| r.corrupted).collect();
    let targets: Vec<bool> = reps.iter().map(|r| r.target_corrupted).collect();
    compute_metrics(&counts, &targets)
}

/// Runs every repetition of `config`. Repetitions run on rayon's pool;
/// `jobs` caps its size. Results do not depend on scheduling.
pub fn run_experiment(config: &ExperimentConfig, jobs: Option<usize>) -> Result<ExperimentResult, SimError> {
    config.validate()?;
    let root = RandomSource::new(config.seed);
    let run = |i: usize| run_repetition(config, i, root.derive(i as u64));
    let reps: Result<Vec<_>, SimError> = match jobs {
        Some(1) => (0..config.repetitions).map(run).collect(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| SimError::ThreadPool(e.to_string()))?
            .install(|| (0..config.repetitions).into_par_iter().map(run).collect()),
        None => (0..config.repetitions).into_par_iter().map(run).collect(),
    };
    let repetitions = reps?;
    let result = ExperimentResult {
        config: config.clone(),
        adversarial_users: config.adversarial_users(),
        metrics: metrics_of(&repetitions)?,
        repetitions,
    };
    result.audit()?;
    Ok(result)
}

/// Voter profiles. The first `adversarial_users()` are adversaries.
pub fn population(config: &ExperimentConfig) -> Vec<AgentProfile> {
    let nadv = config.adversarial_users();
    (0..config.n_users)
        .map(|i| AgentProfile {
            kind: if i < nadv { AgentKind::Adversarial } else { AgentKind::Honest },
            accuracy: config.accuracy_fraction(),
            stake: config.stake_policy,
            prediction: config.adversary_prediction,
        })
        .collect()
}

fn certifier_profiles(config: &ExperimentConfig) -> Vec<AgentProfile> {
    if !config.certifiers_enabled {
        return Vec::new();
    }
    vec![
        AgentProfile {
            kind: AgentKind::Honest,
            accuracy: config.accuracy_fraction(),
            stake: config.stake_policy,
            prediction: config.adversary_prediction,
        };
        config.n_certifiers
    ]
}

pub fn run_repetition(config: &ExperimentConfig, repetition: usize, rng: RandomSource) -> Result<RepetitionRecord, SimError> {
    let target = match config.target {
        TargetPolicy::Random => rng.derive(TARGET_STREAM).index(config.n_propositions),
        TargetPolicy::First => 0,
    };
    let (outcomes, final_reputations) = match config.protocol {
        Protocol::Deepthought => {
            let (o, r) = run_deepthought(config, &rng)?;
            (o, Some(r))
        }
        Protocol::Astraea => (run_astraea(config, &rng)?, None),
    };
    let propositions: Vec<PropositionRecord> = outcomes
        .into_iter()
        .enumerate()
        .map(|(index, outcome)| PropositionRecord {
            index,
            outcome,
            corrupted: outcome != Verdict::True,
        })
        .collect();
    Ok(RepetitionRecord {
        repetition,
        seed: rng.seed(),
        target,
        target_corrupted: propositions[target].corrupted,
        corrupted: propositions.iter().filter(|p| p.corrupted).count(),
        propositions,
        final_reputations,
    })
}

fn salt(rng: &mut RandomSource) -> [u8; SALT_LEN] {
    let mut s = [0u8; SALT_LEN];
    rng.fill(&mut s);
    s
}

struct Pending {
    actor: UserId,
    vote: bool,
    prediction: Option<Prediction>,
    salt: [u8; SALT_LEN],
}

fn run_deepthought(config: &ExperimentConfig, rng: &RandomSource) -> Result<(Vec<Verdict>, Vec<AgentReputation>), SimError> {
    let params = config.protocol_params.clone();
    let mut engine = Engine::with_rng(params.clone(), rng.derive(ENGINE_STREAM))?;
    let mut agents = rng.derive(AGENT_STREAM);
    let submitter = engine.subscribe(Role::Submitter).id;
    let voters: Vec<(UserId, AgentProfile)> =
        population(config).into_iter().map(|p| (engine.subscribe(Role::Voter).id, p)).collect();
    let certifiers: Vec<(UserId, AgentProfile)> =
        certifier_profiles(config).into_iter().map(|p| (engine.subscribe(Role::Certifier).id, p)).collect();
    let first_voter = voters[0].0 .0;
    let profile_of = |id: UserId| &voters[(id.0 - first_voter) as usize].1;

    let mut outcomes = Vec::with_capacity(config.n_propositions);
    for k in 0..config.n_propositions {
        let id = engine.submit_proposition(submitter, &format!("proposition {k}"), config.bounty)?;
        let mut pending = Vec::new();
        for (actor, profile) in &certifiers {
            let Ballot { vote, stake, .. } = profile.ballot(params.certifier_stake_range(), &mut agents);
            let salt = salt(&mut agents);
            engine.commit_certification(*actor, id, stake, ballot_digest(vote, None, &salt))?;
            pending.push(Pending { actor: *actor, vote, prediction: None, salt });
        }
        let slots = engine.proposition(id).expect("just submitted").selected_slots.clone();
        for actor in slots.into_iter().take(params.required_votes) {
            let b = profile_of(actor).ballot(params.voter_stake_range(), &mut agents);
            let prediction = Some(Prediction::from_probability(b.prediction).map_err(deepthought_core::EngineError::from)?);
            let salt = salt(&mut agents);
            engine.commit_vote(actor, id, b.stake, ballot_digest(b.vote, prediction, &salt))?;
            pending.push(Pending { actor, vote: b.vote, prediction, salt });
        }
        engine.advance_block(params.certification_window + 1);
        for p in &pending {
            engine.reveal(p.actor, id, p.vote, p.prediction, &p.salt)?;
        }
        outcomes.push(engine.close_proposition(id)?);
        engine.audit()?;
    }
    let reputations = voters
        .iter()
        .map(|(id, p)| AgentReputation {
            user: *id,
            kind: p.kind,
            reputation: engine.user(*id).expect("subscribed").reputation,
        })
        .collect();
    Ok((outcomes, reputations))
}

fn run_astraea(config: &ExperimentConfig, rng: &RandomSource) -> Result<Vec<Verdict>, SimError> {
    let params = &config.protocol_params;
    let mut select = rng.derive(ENGINE_STREAM);
    let mut agents = rng.derive(AGENT_STREAM);
    // same numbering as the engine: submitter 0, then voters, then certifiers
    let voters: Vec<(UserId, AgentProfile)> =
        population(config).into_iter().enumerate().map(|(i, p)| (UserId(1 + i as u64), p)).collect();
    let certifiers: Vec<(UserId, AgentProfile)> = certifier_profiles(config)
        .into_iter()
        .enumerate()
        .map(|(i, p)| (UserId((1 + voters.len() + i) as u64), p))
        .collect();
    let mut ledger = BaselineLedger::new();
    for (id, _) in voters.iter().chain(&certifiers) {
        ledger.open_account(*id, params.starting_balance as f64);
    }

    let mut outcomes = Vec::with_capacity(config.n_propositions);
    for _ in 0..config.n_propositions {
        let mut ballots = Vec::with_capacity(params.required_votes + certifiers.len());
        for (actor, profile) in &certifiers {
            let b = profile.ballot(params.certifier_stake_range(), &mut agents);
            ballots.push(BaselineBallot { actor: *actor, kind: ActorKind::Certifier, vote: b.vote, stake: b.stake });
        }
        let slots: Vec<usize> = (0..params.voter_slots).map(|_| select.index(voters.len())).collect();
        for &i in slots.iter().take(params.required_votes) {
            let (actor, profile) = &voters[i];
            let b = profile.ballot(params.voter_stake_range(), &mut agents);
            ballots.push(BaselineBallot { actor: *actor, kind: ActorKind::Voter, vote: b.vote, stake: b.stake });
        }
        outcomes.push(ledger.play(&ballots).outcome);
        let drift = (ledger.total() - ledger.issued()).abs();
        if drift > 1e-6 * ledger.issued().max(1.0) {
            return Err(SimError::AuditFailed(format!("baseline ledger drifted by {drift}")));
        }
    }
    Ok(outcomes)
}
