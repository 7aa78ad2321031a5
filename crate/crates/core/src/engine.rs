//! Round and episode state machine coupling the two agents.
//!
//! A round runs: Investor confidence → investment decision → (if funds are
//! committed) Manager confidence, cost draw and embezzlement decision →
//! outcomes → perception → memory update. Rounds without investment leave both
//! memories untouched.

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::agents::{
    decide_embezzlement, decide_investment, draw_cost, InvestmentDecision, InvestorPolicy,
    ManagerPolicy,
};
use crate::belief::{confidence, BeliefParams, MemoryCounts};
use crate::error::{check_probability, Error, Result};
use crate::perception::{
    record_experience, sample_impulse, Experience, Impulse, Outcome, PerceptionMatrix,
    RecollectionProcess,
};
use crate::rng::{Lane, Stream};

/// Coefficients of the default embezzlement success probability
/// `clamp(intercept + manager_weight·p1 − investor_weight·p0, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbezzleCoefficients {
    pub intercept: f64,
    pub manager_weight: f64,
    pub investor_weight: f64,
}

impl Default for EmbezzleCoefficients {
    fn default() -> Self {
        Self {
            intercept: 0.5,
            manager_weight: 0.3,
            investor_weight: 0.2,
        }
    }
}

pub fn default_embezzle_success(p0: f64, p1: f64, c: &EmbezzleCoefficients) -> f64 {
    (c.intercept + c.manager_weight * p1 - c.investor_weight * p0).clamp(0.0, 1.0)
}

/// What the Investor experiences when the Manager takes the money.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbezzlementLoss {
    /// The project yields nothing: the Investor records a failure.
    #[default]
    AlwaysFailure,
    /// Failure only when the embezzlement succeeds; a caught Manager leaves
    /// the project to run its normal course.
    FailureIfEmbezzleSucceeds,
}

/// Objective success probabilities of the project and of embezzlement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessModel {
    pub base_success: f64,
    /// When set, the project succeeds with `clamp(base + gain·(p0 − 0.5))`.
    pub confidence_gain: Option<f64>,
    pub embezzle: EmbezzleCoefficients,
    pub loss: EmbezzlementLoss,
}

impl Default for SuccessModel {
    fn default() -> Self {
        Self {
            base_success: 0.6,
            confidence_gain: None,
            embezzle: EmbezzleCoefficients::default(),
            loss: EmbezzlementLoss::default(),
        }
    }
}

impl SuccessModel {
    pub fn validate(&self) -> Result<()> {
        crate::error::check_closed("psi_base", self.base_success, 0.0, 1.0, "ψ⁰ ∈ [0; 1]")?;
        let c = &self.embezzle;
        for (name, v) in [
            ("embezzle_intercept", c.intercept),
            ("embezzle_manager_weight", c.manager_weight),
            ("embezzle_investor_weight", c.investor_weight),
            ("confidence_gain", self.confidence_gain.unwrap_or(0.0)),
        ] {
            if !v.is_finite() {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    constraint: "finite coefficient",
                });
            }
        }
        Ok(())
    }

    /// ψ⁰ at Investor confidence `p0`.
    pub fn project_success(&self, p0: f64) -> f64 {
        match self.confidence_gain {
            Some(gain) => (self.base_success + gain * (p0 - 0.5)).clamp(0.0, 1.0),
            None => self.base_success,
        }
    }

    /// ψ⁰¹(p0, p1).
    pub fn embezzle_success(&self, p0: f64, p1: f64) -> f64 {
        default_embezzle_success(p0, p1, &self.embezzle)
    }
}

/// Memory and perception of one agent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PlayerState {
    pub counts: MemoryCounts,
    pub belief: BeliefParams,
    pub perception: PerceptionMatrix,
    pub recollection: RecollectionProcess,
}

impl PlayerState {
    pub fn confidence(&self) -> f64 {
        confidence(self.counts, &self.belief)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Players {
    pub investor: PlayerState,
    pub manager: PlayerState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Policies {
    pub investor: InvestorPolicy,
    pub manager: ManagerPolicy,
}

impl Default for Policies {
    fn default() -> Self {
        Self {
            investor: InvestorPolicy::AllOrNothing { mu: 0.6 },
            manager: ManagerPolicy::default(),
        }
    }
}

/// Everything an episode needs besides its seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeConfig {
    /// Initial state of both agents.
    pub players: Players,
    pub policies: Policies,
    pub success: SuccessModel,
    pub rounds: u64,
}

impl EpisodeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::OutOfRange {
                name: "rounds",
                value: 0.0,
                constraint: "rounds ≥ 1",
            });
        }
        self.policies.investor.validate()?;
        self.policies.manager.cost.validate()?;
        self.success.validate()
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn fingerprint(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("episode config is always serializable");
        Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// One round of an episode. Manager and outcome fields are `None` when the
/// Investor abstains; manager outcome and impulse are `None` unless the
/// Manager embezzled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub round_index: u64,
    pub p0: f64,
    pub invest_fraction: InvestmentDecision,
    pub p1: Option<f64>,
    pub h: Option<f64>,
    pub embezzled: Option<bool>,
    pub investor_outcome: Option<Outcome>,
    pub manager_outcome: Option<Outcome>,
    pub investor_impulse: Option<Impulse>,
    pub manager_impulse: Option<Impulse>,
    pub investor_counts_after: MemoryCounts,
    pub manager_counts_after: MemoryCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub config_fingerprint: String,
    pub seed: u64,
    pub rounds: Vec<RoundRecord>,
}

impl Trajectory {
    /// Memory of both agents after the last round.
    pub fn final_counts(&self) -> Option<(MemoryCounts, MemoryCounts)> {
        self.rounds
            .last()
            .map(|r| (r.investor_counts_after, r.manager_counts_after))
    }
}

fn bernoulli(p: f64, rng: &mut Stream) -> Outcome {
    if rng.random::<f64>() < p {
        Outcome::Success
    } else {
        Outcome::Failure
    }
}

fn perceive_and_recall(
    player: &mut PlayerState,
    outcome: Outcome,
    seed: u64,
    round: u64,
    lanes: (Lane, Lane),
) -> Impulse {
    let impulse = sample_impulse(
        outcome,
        &player.perception,
        &mut Stream::for_round(seed, round, lanes.0),
    );
    player.counts = record_experience(
        player.counts,
        Experience { outcome, impulse },
        &player.recollection,
        &mut Stream::for_round(seed, round, lanes.1),
    );
    impulse
}

/// Plays one round. Each random quantity comes from its own
/// `(seed, round_index, lane)` stream.
pub fn run_round(
    players: &Players,
    policies: &Policies,
    success: &SuccessModel,
    seed: u64,
    round_index: u64,
) -> Result<(Players, RoundRecord)> {
    let mut next = *players;
    let p0 = players.investor.confidence();
    let decision = decide_investment(p0, &policies.investor)?;
    let mut record = RoundRecord {
        round_index,
        p0,
        invest_fraction: decision,
        p1: None,
        h: None,
        embezzled: None,
        investor_outcome: None,
        manager_outcome: None,
        investor_impulse: None,
        manager_impulse: None,
        investor_counts_after: players.investor.counts,
        manager_counts_after: players.manager.counts,
    };
    if !decision.invests() {
        return Ok((next, record));
    }

    let p1 = players.manager.confidence();
    let h = draw_cost(
        &policies.manager,
        &mut Stream::for_round(seed, round_index, Lane::ManagerCost),
    );
    let embezzled = decide_embezzlement(p1, h)?;
    let project = || -> Result<Outcome> {
        let psi = check_probability("psi_base", success.project_success(p0))?;
        Ok(bernoulli(
            psi,
            &mut Stream::for_round(seed, round_index, Lane::InvestorOutcome),
        ))
    };

    let (investor_outcome, manager_outcome) = if embezzled {
        let psi = success.embezzle_success(p0, p1);
        let taken = bernoulli(
            psi,
            &mut Stream::for_round(seed, round_index, Lane::ManagerOutcome),
        );
        let investor = match (success.loss, taken) {
            (EmbezzlementLoss::AlwaysFailure, _) | (_, Outcome::Success) => Outcome::Failure,
            (EmbezzlementLoss::FailureIfEmbezzleSucceeds, Outcome::Failure) => project()?,
        };
        (investor, Some(taken))
    } else {
        (project()?, None)
    };

    record.p1 = Some(p1);
    record.h = Some(h);
    record.embezzled = Some(embezzled);
    record.investor_outcome = Some(investor_outcome);
    record.investor_impulse = Some(perceive_and_recall(
        &mut next.investor,
        investor_outcome,
        seed,
        round_index,
        (Lane::InvestorImpulse, Lane::InvestorRecall),
    ));
    if let Some(outcome) = manager_outcome {
        record.manager_outcome = Some(outcome);
        record.manager_impulse = Some(perceive_and_recall(
            &mut next.manager,
            outcome,
            seed,
            round_index,
            (Lane::ManagerImpulse, Lane::ManagerRecall),
        ));
    }
    record.investor_counts_after = next.investor.counts;
    record.manager_counts_after = next.manager.counts;
    Ok((next, record))
}

/// Lazily plays the rounds of one episode.
#[derive(Debug, Clone)]
pub struct Episode<'a> {
    config: &'a EpisodeConfig,
    seed: u64,
    players: Players,
    next_round: u64,
}

impl<'a> Episode<'a> {
    pub fn new(config: &'a EpisodeConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            seed,
            players: config.players,
            next_round: 0,
        })
    }

    /// Current state of both agents.
    pub fn players(&self) -> &Players {
        &self.players
    }
}

impl Iterator for Episode<'_> {
    type Item = Result<RoundRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_round >= self.config.rounds {
            return None;
        }
        let round = self.next_round;
        self.next_round += 1;
        Some(
            run_round(
                &self.players,
                &self.config.policies,
                &self.config.success,
                self.seed,
                round,
            )
            .map(|(players, record)| {
                self.players = players;
                record
            }),
        )
    }
}

pub fn run_episode(config: &EpisodeConfig, seed: u64) -> Result<Trajectory> {
    let rounds = Episode::new(config, seed)?.collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        config_fingerprint: config.fingerprint(),
        seed,
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::CostDistribution;

    fn honest(gamma: f64, initial: MemoryCounts) -> EpisodeConfig {
        EpisodeConfig {
            players: Players {
                investor: PlayerState {
                    counts: initial,
                    perception: PerceptionMatrix::new(gamma).unwrap(),
                    ..Default::default()
                },
                manager: PlayerState::default(),
            },
            policies: Policies {
                investor: InvestorPolicy::all_or_nothing(0.51).unwrap(),
                manager: ManagerPolicy {
                    cost: CostDistribution::point_mass(1.0).unwrap(),
                },
            },
            success: SuccessModel::default(),
            rounds: 1000,
        }
    }

    #[test]
    fn embezzle_success_defaults() {
        let c = EmbezzleCoefficients::default();
        assert_eq!(default_embezzle_success(0.0, 0.0, &c), 0.5);
        assert!((default_embezzle_success(1.0, 1.0, &c) - 0.6).abs() < 1e-15);
        let constant = EmbezzleCoefficients {
            intercept: 1.0,
            manager_weight: 0.0,
            investor_weight: 0.0,
        };
        assert_eq!(default_embezzle_success(0.3, 0.9, &constant), 1.0);
        let steep = EmbezzleCoefficients {
            intercept: 0.0,
            manager_weight: 5.0,
            investor_weight: 5.0,
        };
        assert_eq!(default_embezzle_success(0.0, 1.0, &steep), 1.0);
        assert_eq!(default_embezzle_success(1.0, 0.0, &steep), 0.0);
    }

    #[test]
    fn fresh_investor_abstains() {
        let config = EpisodeConfig {
            players: Players::default(),
            policies: Policies::default(),
            success: SuccessModel::default(),
            rounds: 1,
        };
        let (next, record) =
            run_round(&config.players, &config.policies, &config.success, 5, 0).unwrap();
        assert_eq!(record.p0, 0.5);
        assert_eq!(record.invest_fraction, InvestmentDecision::Abstain);
        assert_eq!(next, config.players);
        assert!(record.p1.is_none() && record.investor_outcome.is_none());
    }

    #[test]
    fn discarded_failures_never_counted() {
        let config = honest(1.0, MemoryCounts::new(5, 0));
        let trajectory = run_episode(&config, 17).unwrap();
        assert!(trajectory
            .rounds
            .iter()
            .all(|r| r.invest_fraction.invests()));
        let (investor, manager) = trajectory.final_counts().unwrap();
        assert_eq!(investor.failures, 0);
        assert_eq!(manager, MemoryCounts::default());
        let successes = investor.successes - 5;
        // Binomial(1000, 0.6): sd ≈ 15.5
        assert!((successes as f64 - 600.0).abs() < 4.0 * 15.5, "{successes}");
    }

    #[test]
    fn deterministic_given_seed() {
        let config = honest(0.3, MemoryCounts::new(4, 1));
        assert_eq!(
            run_episode(&config, 99).unwrap(),
            run_episode(&config, 99).unwrap()
        );
    }

    #[test]
    fn zero_rounds_rejected() {
        let mut config = honest(0.0, MemoryCounts::default());
        config.rounds = 0;
        assert!(run_episode(&config, 1).is_err());
    }

    #[test]
    fn invalid_policy_rejected() {
        let mut config = honest(0.0, MemoryCounts::default());
        config.policies.investor = InvestorPolicy::AllOrNothing { mu: 0.3 };
        assert!(run_episode(&config, 1).is_err());
    }

    #[test]
    fn trajectory_length_matches_rounds() {
        let mut config = honest(0.2, MemoryCounts::new(3, 0));
        config.rounds = 37;
        let t = run_episode(&config, 3).unwrap();
        assert_eq!(t.rounds.len(), 37);
        for (i, r) in t.rounds.iter().enumerate() {
            assert_eq!(r.round_index, i as u64);
        }
    }

    #[test]
    fn embezzlement_always_costs_the_investor() {
        let mut config = honest(0.0, MemoryCounts::new(10, 0));
        config.policies.manager.cost = CostDistribution::point_mass(0.0).unwrap();
        config.rounds = 200;
        let t = run_episode(&config, 8).unwrap();
        for r in t.rounds.iter().filter(|r| r.invest_fraction.invests()) {
            assert_eq!(r.embezzled, Some(true));
            assert_eq!(r.investor_outcome, Some(Outcome::Failure));
            assert!(r.manager_outcome.is_some() && r.manager_impulse.is_some());
        }
    }

    #[test]
    fn caught_manager_lets_project_run() {
        let mut config = honest(0.0, MemoryCounts::new(10, 0));
        config.policies.manager.cost = CostDistribution::point_mass(0.0).unwrap();
        config.success.loss = EmbezzlementLoss::FailureIfEmbezzleSucceeds;
        config.success.base_success = 1.0;
        config.success.embezzle = EmbezzleCoefficients {
            intercept: 0.0,
            manager_weight: 0.0,
            investor_weight: 0.0,
        };
        config.rounds = 50;
        let t = run_episode(&config, 8).unwrap();
        for r in &t.rounds {
            assert_eq!(r.manager_outcome, Some(Outcome::Failure));
            assert_eq!(r.investor_outcome, Some(Outcome::Success));
        }
    }

    #[test]
    fn confidence_gain_shifts_project_success() {
        let mut model = SuccessModel::default();
        assert_eq!(model.project_success(0.9), 0.6);
        model.confidence_gain = Some(0.5);
        assert!((model.project_success(0.9) - 0.8).abs() < 1e-12);
        model.confidence_gain = Some(10.0);
        assert_eq!(model.project_success(0.9), 1.0);
    }

    #[test]
    fn fingerprint_tracks_config() {
        let a = honest(0.2, MemoryCounts::default());
        let mut b = a;
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.rounds += 1;
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 64);
    }
}
