//! Commit-reveal ballot digests.
//!
//! Canonical byte layout hashed with keccak-256 (Ethereum padding, not
//! SHA3-256):
//!
//! ```text
//! voter:      vote (1 byte: 0x01 TRUE, 0x00 FALSE) | prediction (u16 BE, basis points) | salt
//! certifier:  vote (1 byte)                                                           | salt
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use sha3::{Digest as _, Keccak256};
use thiserror::Error;

/// Basis points per unit probability.
pub const PREDICTION_SCALE: u16 = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CommitmentError {
    #[error("prediction {0} is outside [0, 1]")]
    PredictionOutOfRange(f64),
    #[error("prediction {0} basis points exceeds {PREDICTION_SCALE}")]
    BasisPointsOutOfRange(u16),
}

/// A voter's stated probability that the outcome is TRUE, in basis points.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub struct Prediction(u16);

impl Prediction {
    pub const ZERO: Prediction = Prediction(0);
    pub const ONE: Prediction = Prediction(PREDICTION_SCALE);

    pub fn from_basis_points(bp: u16) -> Result<Self, CommitmentError> {
        if bp > PREDICTION_SCALE {
            return Err(CommitmentError::BasisPointsOutOfRange(bp));
        }
        Ok(Prediction(bp))
    }

    /// Rounds a probability to the nearest basis point.
    pub fn from_probability(p: f64) -> Result<Self, CommitmentError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(CommitmentError::PredictionOutOfRange(p));
        }
        Ok(Prediction((p * f64::from(PREDICTION_SCALE)).round() as u16))
    }

    pub fn basis_points(self) -> u16 {
        self.0
    }

    pub fn probability(self) -> f64 {
        f64::from(self.0) / f64::from(PREDICTION_SCALE)
    }
}

impl TryFrom<u16> for Prediction {
    type Error = CommitmentError;

    fn try_from(bp: u16) -> Result<Self, Self::Error> {
        Prediction::from_basis_points(bp)
    }
}

impl From<Prediction> for u16 {
    fn from(p: Prediction) -> u16 {
        p.0
    }
}

/// Secret bytes mixed into a commitment.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Salt(#[serde(with = "hex::serde")] pub Vec<u8>);

impl Salt {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl From<&[u8]> for Salt {
    fn from(b: &[u8]) -> Self {
        Salt(b.to_vec())
    }
}

impl fmt::Debug for Salt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Salt({})", hex::encode(&self.0))
    }
}

/// 32-byte keccak-256 output.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digest(#[serde(with = "hex::serde")] pub [u8; 32]);

impl Digest {
    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.to_hex())
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

pub fn keccak256(bytes: &[u8]) -> Digest {
    Digest(Keccak256::digest(bytes).into())
}

/// Canonical preimage of a ballot. `prediction` is present for voters and
/// absent for certifiers.
pub fn canonical_encoding(vote: bool, prediction: Option<Prediction>, salt: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(3 + salt.len());
    out.push(u8::from(vote));
    if let Some(p) = prediction {
        out.extend_from_slice(&p.basis_points().to_be_bytes());
    }
    out.extend_from_slice(salt);
    out
}

pub fn ballot_digest(vote: bool, prediction: Option<Prediction>, salt: &[u8]) -> Digest {
    keccak256(&canonical_encoding(vote, prediction, salt))
}

/// Digest of a ballot whose prediction is given as a probability.
pub fn compute_digest(vote: bool, prediction: Option<f64>, salt: &[u8]) -> Result<Digest, CommitmentError> {
    let prediction = prediction.map(Prediction::from_probability).transpose()?;
    Ok(ballot_digest(vote, prediction, salt))
}
