//! Vote weights, outcome aggregation, and the peer-prediction scoreboard.
//!
//! Everything here is a pure function of its inputs plus, for the
//! scoreboard, an explicit [`RandomSource`] used to pick reference peers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::RandomSource;
use crate::types::{UserId, Verdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoringError {
    #[error("{name} = {value} is outside the domain of the function")]
    Domain { name: &'static str, value: f64 },
    #[error("voter {0} has no ballot in the collection")]
    VoterNotFound(UserId),
}

fn domain(name: &'static str, value: f64) -> ScoringError {
    ScoringError::Domain { name, value }
}

/// Vote weight `[α√s + (1−α)s]·√r`, sub-linear in stake.
pub fn vote_weight(stake: f64, reputation: u32, alpha: f64) -> Result<f64, ScoringError> {
    if !(stake > 0.0 && stake.is_finite()) {
        return Err(domain("stake", stake));
    }
    if reputation == 0 {
        return Err(domain("reputation", 0.0));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(domain("alpha", alpha));
    }
    Ok((alpha * stake.sqrt() + (1.0 - alpha) * stake) * f64::from(reputation).sqrt())
}

/// Aggregate of one side (voters or certifiers) of a proposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideOutcome {
    pub verdict: Verdict,
    pub true_weight: f64,
    pub false_weight: f64,
}

/// Sums weights per side. Ties, including the empty input, are `Unknown`.
pub fn side_outcome<I>(votes: I) -> SideOutcome
where
    I: IntoIterator<Item = (bool, f64)>,
{
    let (mut t, mut f) = (0.0, 0.0);
    for (vote, weight) in votes {
        if vote {
            t += weight;
        } else {
            f += weight;
        }
    }
    SideOutcome {
        verdict: compare_weights(t, f),
        true_weight: t,
        false_weight: f,
    }
}

fn compare_weights(t: f64, f: f64) -> Verdict {
    if t > f {
        Verdict::True
    } else if t < f {
        Verdict::False
    } else {
        Verdict::Unknown
    }
}

/// Proposition outcome from the voter and certifier verdicts.
///
/// | voters \ certifiers | TRUE    | FALSE   | Unknown |
/// |---------------------|---------|---------|---------|
/// | TRUE                | TRUE    | Unknown | TRUE    |
/// | FALSE               | Unknown | FALSE   | FALSE   |
/// | Unknown             | Unknown | Unknown | Unknown |
pub fn combine_outcomes(voters: Verdict, certifiers: Verdict) -> Verdict {
    use Verdict::*;
    match (voters, certifiers) {
        (Unknown, _) => Unknown,
        (v, Unknown) => v,
        (v, c) if v == c => v,
        _ => Unknown,
    }
}

/// Quadratic scoring rule: `2q − q²` against a TRUE reference, `1 − q²`
/// against FALSE.
pub fn prediction_score(prediction: f64, reference_vote: bool) -> Result<f64, ScoringError> {
    if !(0.0..=1.0).contains(&prediction) {
        return Err(domain("prediction", prediction));
    }
    let q = prediction;
    Ok(if reference_vote { 2.0 * q - q * q } else { 1.0 - q * q })
}

/// The fields of a revealed voter ballot that scoring needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallotView {
    pub voter: UserId,
    pub vote: bool,
    pub prediction: f64,
    pub stake: u64,
    pub reputation: u32,
}

/// Information score of ballot `index`: one minus the squared distance
/// between its prediction and the mean prediction of the other voters that
/// cast the same vote. Ballots from the same voter are excluded from the
/// mean; an empty peer set scores 1.
pub fn information_score(ballots: &[BallotView], index: usize) -> Result<f64, ScoringError> {
    let me = ballots.get(index).ok_or(ScoringError::VoterNotFound(UserId(u64::MAX)))?;
    if !(0.0..=1.0).contains(&me.prediction) {
        return Err(domain("prediction", me.prediction));
    }
    let (sum, n) = ballots
        .iter()
        .filter(|b| b.voter != me.voter && b.vote == me.vote)
        .fold((0.0, 0usize), |(s, n), b| (s + b.prediction, n + 1));
    if n == 0 {
        return Ok(1.0);
    }
    let mean = sum / n as f64;
    let d = mean - me.prediction;
    Ok(1.0 - d * d)
}

/// [`information_score`] for the first ballot cast by `voter`.
pub fn voter_information_score(voter: UserId, ballots: &[BallotView]) -> Result<f64, ScoringError> {
    let index = ballots
        .iter()
        .position(|b| b.voter == voter)
        .ok_or(ScoringError::VoterNotFound(voter))?;
    information_score(ballots, index)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreboardEntry {
    /// Position of the ballot in reveal order.
    pub ballot: usize,
    pub voter: UserId,
    pub vote: bool,
    pub total_score: f64,
    pub prediction_score: f64,
    pub information_score: f64,
    pub stake: u64,
    pub reputation: u32,
    /// Ballot index of the peer whose vote was the prediction reference, if any.
    pub reference: Option<usize>,
}

/// Entries kept in non-increasing `total_score` order; among equal scores
/// the earlier insertion ranks first.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Scoreboard {
    entries: Vec<ScoreboardEntry>,
}

impl Scoreboard {
    pub fn new() -> Self {
        Self::default()
    }

    /// In-order insertion, linear in the current length.
    pub fn insert(&mut self, entry: ScoreboardEntry) {
        let at = self
            .entries
            .iter()
            .position(|e| e.total_score < entry.total_score)
            .unwrap_or(self.entries.len());
        self.entries.insert(at, entry);
    }

    pub fn entries(&self) -> &[ScoreboardEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Scores every ballot (in reveal order) and ranks them.
///
/// The prediction reference for ballot `i` is drawn uniformly from ballots
/// cast by other voters. With no such ballot the proposition outcome is the
/// reference, and an `Unknown` outcome scores 0.5.
pub fn build_scoreboard(
    ballots: &[BallotView],
    outcome: Verdict,
    rng: &mut RandomSource,
) -> Result<Scoreboard, ScoringError> {
    let mut board = Scoreboard::new();
    for (i, b) in ballots.iter().enumerate() {
        let peers: Vec<usize> = (0..ballots.len()).filter(|&j| ballots[j].voter != b.voter).collect();
        let (reference, pr_score) = if peers.is_empty() {
            let score = match outcome.as_bool() {
                Some(v) => prediction_score(b.prediction, v)?,
                None => 0.5,
            };
            (None, score)
        } else {
            let j = peers[rng.index(peers.len())];
            (Some(j), prediction_score(b.prediction, ballots[j].vote)?)
        };
        let ir_score = information_score(ballots, i)?;
        board.insert(ScoreboardEntry {
            ballot: i,
            voter: b.voter,
            vote: b.vote,
            total_score: pr_score + ir_score,
            prediction_score: pr_score,
            information_score: ir_score,
            stake: b.stake,
            reputation: b.reputation,
            reference,
        });
    }
    Ok(board)
}

/// Overall stance of a voter who may hold several ballots: the side with the
/// larger summed weight, `Unknown` on a tie.
pub fn aggregate_voter_stance(voter: UserId, ballots: &[(UserId, bool, f64)]) -> Result<Verdict, ScoringError> {
    let mut found = false;
    let side = side_outcome(ballots.iter().filter(|(id, _, _)| *id == voter).map(|&(_, v, w)| {
        found = true;
        (v, w)
    }));
    if !found {
        return Err(ScoringError::VoterNotFound(voter));
    }
    Ok(side.verdict)
}
