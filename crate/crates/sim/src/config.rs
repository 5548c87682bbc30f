//! Experiment configuration files.
//!
//! A config is a TOML (or `.json`) document:
//!
//! ```toml
//! id = "3"
//! protocol = "deepthought"      # or "astraea"
//! n_users = 20
//! n_propositions = 100
//! accuracy = 80.0               # percent
//! adversarial_pct = 25.0        # percent
//! repetitions = 20
//! seed = 2023
//! certifiers_enabled = false
//! n_certifiers = 3
//! bounty = 10
//! stake_policy = "min"          # "min" | "max" | "uniform" | { fixed = 5 }
//! adversary_prediction = "zero" # or "mimic"
//! target = "random"             # or "first"
//!
//! [protocol_params]
//! alpha = 0.7
//! beta = 0.5
//! ```
//!
//! Everything except the population and run sizes has a default. A matrix
//! file lists other config files relative to its own directory:
//!
//! ```toml
//! configs = ["row01.toml", "row02.toml"]
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use deepthought_core::ProtocolParams;
use serde::{Deserialize, Serialize};

use crate::agents::{PredictionPolicy, StakePolicy};
use crate::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Deepthought,
    Astraea,
}

impl Protocol {
    pub fn label(self) -> &'static str {
        match self {
            Protocol::Deepthought => "deepthought",
            Protocol::Astraea => "astraea",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Protocol {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "deepthought" => Ok(Protocol::Deepthought),
            "astraea" => Ok(Protocol::Astraea),
            other => Err(SimError::ConfigInvalid(format!("unknown protocol `{other}`"))),
        }
    }
}

/// Which proposition of a repetition is measured by C-SPEC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetPolicy {
    /// Uniformly drawn per repetition from the repetition's own stream.
    #[default]
    Random,
    /// The first submitted proposition.
    First,
}

fn default_n_certifiers() -> usize {
    3
}

fn default_bounty() -> u64 {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub id: String,
    pub protocol: Protocol,
    pub n_users: usize,
    pub n_propositions: usize,
    /// Percent.
    pub accuracy: f64,
    /// Percent of `n_users` that always vote FALSE.
    pub adversarial_pct: f64,
    pub repetitions: usize,
    pub seed: u64,
    #[serde(default)]
    pub protocol_params: ProtocolParams,
    #[serde(default)]
    pub certifiers_enabled: bool,
    #[serde(default = "default_n_certifiers")]
    pub n_certifiers: usize,
    #[serde(default = "default_bounty")]
    pub bounty: u64,
    #[serde(default)]
    pub stake_policy: StakePolicy,
    #[serde(default)]
    pub adversary_prediction: PredictionPolicy,
    #[serde(default)]
    pub target: TargetPolicy,
}

impl ExperimentConfig {
    /// Population and run sizes with every other field at its default.
    pub fn new(
        protocol: Protocol,
        n_users: usize,
        n_propositions: usize,
        accuracy: f64,
        adversarial_pct: f64,
        repetitions: usize,
        seed: u64,
    ) -> Self {
        Self {
            id: String::new(),
            protocol,
            n_users,
            n_propositions,
            accuracy,
            adversarial_pct,
            repetitions,
            seed,
            protocol_params: ProtocolParams::default(),
            certifiers_enabled: false,
            n_certifiers: default_n_certifiers(),
            bounty: default_bounty(),
            stake_policy: StakePolicy::default(),
            adversary_prediction: PredictionPolicy::default(),
            target: TargetPolicy::default(),
        }
    }

    pub fn with_protocol(mut self, protocol: Protocol) -> Self {
        self.protocol = protocol;
        self
    }

    pub fn adversarial_users(&self) -> usize {
        ((self.n_users as f64 * self.adversarial_pct / 100.0).round() as usize).min(self.n_users)
    }

    pub fn accuracy_fraction(&self) -> f64 {
        self.accuracy / 100.0
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::ConfigInvalid(m));
        if self.n_users == 0 {
            return bad("n_users must be at least 1".into());
        }
        if self.n_propositions == 0 {
            return bad("n_propositions must be at least 1".into());
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        for (name, v) in [("accuracy", self.accuracy), ("adversarial_pct", self.adversarial_pct)] {
            if !(0.0..=100.0).contains(&v) {
                return bad(format!("{name} must be a percentage in [0, 100], got {v}"));
            }
        }
        self.protocol_params
            .validate()
            .map_err(|e| SimError::ConfigInvalid(e.to_string()))?;
        let p = &self.protocol_params;
        if self.bounty < p.min_bounty {
            return bad(format!("bounty {} is below min_bounty {}", self.bounty, p.min_bounty));
        }
        let needed = self.bounty as u128 * self.n_propositions as u128;
        if (p.starting_balance as u128) < needed {
            return bad(format!(
                "starting_balance {} cannot fund {} bounties of {}",
                p.starting_balance, self.n_propositions, self.bounty
            ));
        }
        if self.certifiers_enabled && self.n_certifiers == 0 {
            return bad("certifiers_enabled needs n_certifiers >= 1".into());
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, SimError> {
        let c: Self = toml::from_str(text).map_err(|e| SimError::ConfigInvalid(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_json_str(text: &str) -> Result<Self, SimError> {
        let c: Self = serde_json::from_str(text).map_err(|e| SimError::ConfigInvalid(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    /// Reads and validates a config. `.json` files are parsed as JSON,
    /// anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, SimError> {
        let text = read(path)?;
        let mut c = if is_json(path) {
            Self::from_json_str(&text)?
        } else {
            Self::from_toml_str(&text)?
        };
        if c.id.is_empty() {
            c.id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigMatrix {
    configs: Vec<PathBuf>,
}

/// Loads either a single config or every config listed by a matrix file.
pub fn load_configs(path: &Path) -> Result<Vec<ExperimentConfig>, SimError> {
    let text = read(path)?;
    let matrix: Option<ConfigMatrix> = if is_json(path) {
        serde_json::from_str(&text).ok()
    } else {
        toml::from_str(&text).ok()
    };
    match matrix {
        Some(m) => {
            if m.configs.is_empty() {
                return Err(SimError::ConfigInvalid(format!("{} lists no configs", path.display())));
            }
            let dir = path.parent().unwrap_or(Path::new("."));
            m.configs.iter().map(|c| ExperimentConfig::load(&dir.join(c))).collect()
        }
        None => Ok(vec![ExperimentConfig::load(path)?]),
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn read(path: &Path) -> Result<String, SimError> {
    std::fs::read_to_string(path).map_err(|source| SimError::Io {
        path: path.display().to_string(),
        source,
    })
}
