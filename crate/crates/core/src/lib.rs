//! A human-based oracle that decides the truth of plain-text propositions by
//! combining stake- and reputation-weighted voting with commit-reveal ballots,
//! a peer-prediction scoreboard, and staking rewards.
//!
//! The crate is chain-agnostic: time is a logical block counter advanced by
//! the caller, and randomness comes from an injected seeded [`RandomSource`].
//! [`astraea`] holds the equal-weight voting game used as a baseline.

pub mod astraea;
pub mod commitment;
pub mod economy;
pub mod engine;
pub mod params;
pub mod rng;
pub mod scoring;
mod types;

pub use commitment::{compute_digest, Digest, Prediction, Salt};
pub use engine::{Engine, EngineError, Proposition, RevealedVote, UserAccount, VoteCommitment};
pub use params::{ParamsError, ProtocolParams};
pub use rng::RandomSource;
pub use types::{ActorKind, Phase, PropositionId, Role, UserId, Verdict};
