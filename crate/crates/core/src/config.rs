//! Run configuration file.
//!
//! A TOML document with `[investor]`, `[manager]`, `[success]` and
//! `[simulation]` sections. Unknown keys anywhere are errors; omitted keys
//! take the defaults of [`RunConfig::default`].

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::agents::{CostDistribution, InvestorPolicy, ManagerPolicy};
use crate::belief::{BeliefParams, MemoryCounts};
use crate::engine::{
    EmbezzleCoefficients, EmbezzlementLoss, EpisodeConfig, PlayerState, Players, Policies,
    SuccessModel,
};
use crate::error::{Error, Result};
use crate::perception::{PerceptionMatrix, RecollectionProcess};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub investor: InvestorSection,
    pub manager: ManagerSection,
    pub success: SuccessSection,
    pub simulation: SimulationSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InvestorSection {
    pub prior_success: f64,
    pub prior_failure: f64,
    pub gamma: f64,
    pub initial_successes: u64,
    pub initial_failures: u64,
    pub policy: PolicySection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recollection: Option<RecollectionSection>,
}

impl Default for InvestorSection {
    fn default() -> Self {
        Self {
            prior_success: 1.0,
            prior_failure: 1.0,
            gamma: 0.3,
            initial_successes: 0,
            initial_failures: 0,
            policy: PolicySection::default(),
            recollection: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicySection {
    AllOrNothing { mu: f64 },
    Tiered { mu1: f64, mu2: f64, mu3: f64 },
}

impl Default for PolicySection {
    fn default() -> Self {
        Self::AllOrNothing { mu: 0.6 }
    }
}

/// `[to_success_count, to_failure_count]` inclusion probabilities per
/// experience.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecollectionSection {
    pub success_normal: [f64; 2],
    pub success_misattributed: [f64; 2],
    pub failure_normal: [f64; 2],
    pub failure_misattributed: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ManagerSection {
    pub prior_success: f64,
    pub prior_failure: f64,
    pub gamma: f64,
    pub initial_successes: u64,
    pub initial_failures: u64,
    pub cost: CostSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recollection: Option<RecollectionSection>,
}

impl Default for ManagerSection {
    fn default() -> Self {
        Self {
            prior_success: 1.0,
            prior_failure: 1.0,
            gamma: 0.2,
            initial_successes: 0,
            initial_failures: 0,
            cost: CostSection::Uniform,
            recollection: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CostSection {
    #[default]
    Uniform,
    PointMass {
        value: f64,
    },
    Beta {
        alpha: f64,
        beta: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuccessSection {
    pub psi_base: f64,
    pub embezzle_intercept: f64,
    pub embezzle_manager_weight: f64,
    pub embezzle_investor_weight: f64,
    pub confidence_enhanced: bool,
    pub confidence_gain: f64,
    pub investor_outcome_on_embezzle: EmbezzlementLoss,
}

impl Default for SuccessSection {
    fn default() -> Self {
        let c = EmbezzleCoefficients::default();
        Self {
            psi_base: 0.6,
            embezzle_intercept: c.intercept,
            embezzle_manager_weight: c.manager_weight,
            embezzle_investor_weight: c.investor_weight,
            confidence_enhanced: false,
            confidence_gain: 0.2,
            investor_outcome_on_embezzle: EmbezzlementLoss::AlwaysFailure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationSection {
    pub rounds: u64,
    pub replications: u64,
    pub seed: u64,
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self {
            rounds: 1000,
            replications: 100,
            seed: 42,
        }
    }
}

fn recollection(section: &Option<RecollectionSection>) -> Result<RecollectionProcess> {
    match section {
        None => Ok(RecollectionProcess::default()),
        Some(r) => RecollectionProcess::new(
            r.success_normal,
            r.success_misattributed,
            r.failure_normal,
            r.failure_misattributed,
        ),
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        config.to_episode()?;
        Ok(config)
    }

    /// Reads and validates a config file. I/O failures are returned apart
    /// from parse and validation failures.
    pub fn load(path: &Path) -> std::result::Result<Result<Self>, std::io::Error> {
        let text = fs::read_to_string(path)?;
        Ok(Self::from_toml_str(&text))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("run config is always representable as TOML")
    }

    pub fn validate(&self) -> Result<()> {
        self.to_episode().map(drop)
    }

    /// Builds the engine configuration, checking every interval constraint.
    pub fn to_episode(&self) -> Result<EpisodeConfig> {
        let i = &self.investor;
        let m = &self.manager;
        let s = &self.success;
        let investor = PlayerState {
            counts: MemoryCounts::new(i.initial_successes, i.initial_failures),
            belief: BeliefParams::new(i.prior_success, i.prior_failure)?,
            perception: PerceptionMatrix::new(i.gamma)?,
            recollection: recollection(&i.recollection)?,
        };
        let manager = PlayerState {
            counts: MemoryCounts::new(m.initial_successes, m.initial_failures),
            belief: BeliefParams::new(m.prior_success, m.prior_failure)?,
            perception: PerceptionMatrix::new(m.gamma)?,
            recollection: recollection(&m.recollection)?,
        };
        let investor_policy = match i.policy {
            PolicySection::AllOrNothing { mu } => InvestorPolicy::all_or_nothing(mu)?,
            PolicySection::Tiered { mu1, mu2, mu3 } => InvestorPolicy::tiered(mu1, mu2, mu3)?,
        };
        let cost = match m.cost {
            CostSection::Uniform => CostDistribution::Uniform,
            CostSection::PointMass { value } => CostDistribution::point_mass(value)?,
            CostSection::Beta { alpha, beta } => CostDistribution::beta(alpha, beta)?,
        };
        if self.simulation.replications == 0 {
            return Err(Error::OutOfRange {
                name: "replications",
                value: 0.0,
                constraint: "replications ≥ 1",
            });
        }
        let episode = EpisodeConfig {
            players: Players { investor, manager },
            policies: Policies {
                investor: investor_policy,
                manager: ManagerPolicy { cost },
            },
            success: SuccessModel {
                base_success: s.psi_base,
                confidence_gain: s.confidence_enhanced.then_some(s.confidence_gain),
                embezzle: EmbezzleCoefficients {
                    intercept: s.embezzle_intercept,
                    manager_weight: s.embezzle_manager_weight,
                    investor_weight: s.embezzle_investor_weight,
                },
                loss: s.investor_outcome_on_embezzle,
            },
            rounds: self.simulation.rounds,
        };
        episode.validate()?;
        Ok(episode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn empty_document_is_default() {
        assert_eq!(RunConfig::from_toml_str("").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        for doc in [
            "[investor]\ngama = 0.2\n",
            "[simulation]\nround = 3\n",
            "[extra]\n",
            "[investor.policy]\nmode = \"all_or_nothing\"\nmu = 0.7\nmu2 = 0.7\n",
            "[manager.cost]\nkind = \"point_mass\"\nvalue = 0.3\nalpha = 1.0\n",
        ] {
            assert!(
                matches!(RunConfig::from_toml_str(doc), Err(Error::Config(_))),
                "{doc}"
            );
        }
    }

    #[test]
    fn threshold_errors_cite_interval() {
        let err =
            RunConfig::from_toml_str("[investor.policy]\nmode = \"all_or_nothing\"\nmu = 0.4\n")
                .unwrap_err();
        assert!(err.to_string().contains("μ ∈ (0.5; 1]"), "{err}");
        let err = RunConfig::from_toml_str(
            "[investor.policy]\nmode = \"tiered\"\nmu1 = 0.6\nmu2 = 0.9\nmu3 = 0.95\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("μ² ∈ (0.65; 0.8]"), "{err}");
    }

    #[test]
    fn zero_prior_rejected() {
        let err = RunConfig::from_toml_str("[investor]\nprior_success = 0.0\n").unwrap_err();
        assert!(err.to_string().contains("prior_success"), "{err}");
    }

    #[test]
    fn full_document_parses() {
        let doc = r#"
[investor]
prior_success = 2.0
prior_failure = 1.0
gamma = 0.5
initial_successes = 10
initial_failures = 2

[investor.policy]
mode = "tiered"
mu1 = 0.6
mu2 = 0.7
mu3 = 0.85

[investor.recollection]
success_normal = [0.9, 0.0]
success_misattributed = [0.0, 0.0]
failure_normal = [0.0, 1.0]
failure_misattributed = [0.0, 0.1]

[manager]
gamma = 0.1

[manager.cost]
kind = "beta"
alpha = 2.0
beta = 3.0

[success]
psi_base = 0.7
confidence_enhanced = true
investor_outcome_on_embezzle = "failure_if_embezzle_succeeds"

[simulation]
rounds = 50
replications = 3
seed = 7
"#;
        let config = RunConfig::from_toml_str(doc).unwrap();
        let episode = config.to_episode().unwrap();
        assert_eq!(episode.rounds, 50);
        assert_eq!(episode.success.confidence_gain, Some(0.2));
        assert_eq!(
            episode.success.loss,
            EmbezzlementLoss::FailureIfEmbezzleSucceeds
        );
        assert_eq!(
            episode.policies.manager.cost,
            CostDistribution::Beta {
                alpha: 2.0,
                beta: 3.0
            }
        );
        assert_eq!(
            RunConfig::from_toml_str(&config.to_toml_string()).unwrap(),
            config
        );
    }
}
