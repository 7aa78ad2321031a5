//! Replication batches, parameter sweeps and the brute-force confidence oracle.
//!
//! Episode statistics are merged through [`StatsAccumulator`], whose sums are
//! exact (Shewchuk partials), so the aggregate of a set of episodes does not
//! depend on how they were grouped or in which order they completed.
//! Standard errors use the normal approximation across replications.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::agents::{CostDistribution, InvestorPolicy};
use crate::belief::MemoryCounts;
use crate::engine::{Episode, EpisodeConfig};
use crate::error::{Error, Result};
use crate::perception::{
    asymptotic_confidence, record_experience, sample_impulse, Experience, Outcome,
    PerceptionMatrix, RecollectionProcess, TrueFrequencies,
};
use crate::rng::{mix64, point_seed, replication_seed, Stream};

/// Exactly-rounded floating point sum that can be merged without loss.
///
/// Equality compares the exact sums, not their representation.
#[derive(Debug, Clone, Default)]
pub struct ExactSum {
    // non-overlapping, increasing magnitude
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn add(&mut self, value: f64) {
        let mut x = value;
        let mut kept = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        self.partials.truncate(kept);
        self.partials.push(x);
    }

    pub fn merge(&mut self, other: &ExactSum) {
        for &p in &other.partials {
            self.add(p);
        }
    }

    /// The exact sum rounded to nearest, ties to even.
    pub fn value(&self) -> f64 {
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            lo = y - (hi - x);
            if lo != 0.0 {
                break;
            }
        }
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

impl PartialEq for ExactSum {
    fn eq(&self, other: &Self) -> bool {
        let mut difference = self.clone();
        for &p in &other.partials {
            difference.add(-p);
        }
        difference.value() == 0.0
    }
}

/// Exact first and second moment sums.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub sum: ExactSum,
    pub sum_sq: ExactSum,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum.add(x);
        self.sum_sq.add(x * x);
    }

    pub fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum.merge(&other.sum);
        self.sum_sq.merge(&other.sum_sq);
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum.value() / self.count as f64)
    }

    /// Standard error of the mean; absent for fewer than two observations.
    pub fn standard_error(&self) -> Option<f64> {
        if self.count < 2 {
            return None;
        }
        let n = self.count as f64;
        let sum = self.sum.value();
        let var = ((self.sum_sq.value() - sum * sum / n) / (n - 1.0)).max(0.0);
        Some((var / n).sqrt())
    }
}

/// Summary of one episode.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EpisodeStats {
    pub final_p0: f64,
    pub final_p1: f64,
    pub rounds: u64,
    pub invested_rounds: u64,
    /// Sum of invested fractions, in thirds.
    pub invested_thirds: u64,
    pub embezzlements: u64,
    /// Realized (not perceived) Investor outcomes.
    pub investor_successes: u64,
    pub investor_outcomes: u64,
    pub final_investor_counts: MemoryCounts,
    pub final_manager_counts: MemoryCounts,
}

impl EpisodeStats {
    /// Plays an episode and summarizes it without keeping its rounds.
    pub fn simulate(config: &EpisodeConfig, seed: u64) -> Result<Self> {
        let mut episode = Episode::new(config, seed)?;
        let mut stats = EpisodeStats::default();
        for record in episode.by_ref() {
            let r = record?;
            stats.rounds += 1;
            if r.invest_fraction.invests() {
                stats.invested_rounds += 1;
                stats.invested_thirds += u64::from(r.invest_fraction.thirds());
            }
            if r.embezzled == Some(true) {
                stats.embezzlements += 1;
            }
            if let Some(outcome) = r.investor_outcome {
                stats.investor_outcomes += 1;
                if outcome == Outcome::Success {
                    stats.investor_successes += 1;
                }
            }
        }
        let players = episode.players();
        stats.final_p0 = players.investor.confidence();
        stats.final_p1 = players.manager.confidence();
        stats.final_investor_counts = players.investor.counts;
        stats.final_manager_counts = players.manager.counts;
        Ok(stats)
    }
}

/// Mergeable aggregate over episodes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatsAccumulator {
    pub p0: Moments,
    pub p1: Moments,
    pub rounds: u64,
    pub invested_rounds: u64,
    pub invested_thirds: u64,
    pub embezzlements: u64,
    pub investor_successes: u64,
    pub investor_outcomes: u64,
}

impl StatsAccumulator {
    pub fn push(&mut self, e: &EpisodeStats) {
        self.p0.push(e.final_p0);
        self.p1.push(e.final_p1);
        self.rounds += e.rounds;
        self.invested_rounds += e.invested_rounds;
        self.invested_thirds += e.invested_thirds;
        self.embezzlements += e.embezzlements;
        self.investor_successes += e.investor_successes;
        self.investor_outcomes += e.investor_outcomes;
    }

    pub fn merge(&mut self, other: &StatsAccumulator) {
        self.p0.merge(&other.p0);
        self.p1.merge(&other.p1);
        self.rounds += other.rounds;
        self.invested_rounds += other.invested_rounds;
        self.invested_thirds += other.invested_thirds;
        self.embezzlements += other.embezzlements;
        self.investor_successes += other.investor_successes;
        self.investor_outcomes += other.investor_outcomes;
    }

    pub fn episodes(&self) -> u64 {
        self.p0.count
    }

    pub fn finish(&self, closed_form_confidence: Option<f64>) -> AggregateStats {
        let ratio = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
        AggregateStats {
            episodes: self.episodes(),
            rounds: self.rounds,
            invested_rounds: self.invested_rounds,
            embezzlements: self.embezzlements,
            mean_p0: self.p0.mean().unwrap_or(f64::NAN),
            se_p0: self.p0.standard_error(),
            mean_p1: self.p1.mean().unwrap_or(f64::NAN),
            se_p1: self.p1.standard_error(),
            invest_rate: ratio(self.invested_rounds, self.rounds).unwrap_or(0.0),
            mean_fraction: ratio(self.invested_thirds, 3 * self.invested_rounds),
            embezzle_rate: ratio(self.embezzlements, self.invested_rounds),
            empirical_success_freq: ratio(self.investor_successes, self.investor_outcomes),
            closed_form_confidence,
        }
    }
}

/// Aggregate of a batch of episodes at one parameter point.
///
/// Rates are pooled over all rounds of all episodes. `mean_fraction` is the
/// mean committed fraction over invested rounds; `embezzle_rate` is taken
/// among invested rounds. `closed_form_confidence` is the Investor's long-run
/// confidence with true success frequency ψ⁰ (an honest Manager), absent when
/// that model is degenerate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateStats {
    pub episodes: u64,
    pub rounds: u64,
    pub invested_rounds: u64,
    pub embezzlements: u64,
    pub mean_p0: f64,
    pub se_p0: Option<f64>,
    pub mean_p1: f64,
    pub se_p1: Option<f64>,
    pub invest_rate: f64,
    pub mean_fraction: Option<f64>,
    pub embezzle_rate: Option<f64>,
    pub empirical_success_freq: Option<f64>,
    pub closed_form_confidence: Option<f64>,
}

/// Investor's long-run confidence under an honest Manager.
pub fn investor_closed_form(config: &EpisodeConfig) -> Option<f64> {
    let investor = &config.players.investor;
    let freq = TrueFrequencies::new(config.success.base_success).ok()?;
    asymptotic_confidence(&investor.perception, &investor.recollection, &freq).ok()
}

/// Runs `n` episodes seeded `replication_seed(base_seed, i)` for `i < n`.
pub fn replicate(config: &EpisodeConfig, n: u64, base_seed: u64) -> Result<StatsAccumulator> {
    replicate_range(config, 0..n, base_seed)
}

/// Replications `range` of a batch, for splitting work into mergeable parts.
pub fn replicate_range(
    config: &EpisodeConfig,
    range: std::ops::Range<u64>,
    base_seed: u64,
) -> Result<StatsAccumulator> {
    let mut acc = StatsAccumulator::default();
    for i in range {
        acc.push(&EpisodeStats::simulate(
            config,
            replication_seed(base_seed, i),
        )?);
    }
    Ok(acc)
}

pub fn run_replications(config: &EpisodeConfig, n: u64, base_seed: u64) -> Result<AggregateStats> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "replications",
            value: 0.0,
            constraint: "replications ≥ 1",
        });
    }
    config.validate()?;
    Ok(replicate(config, n, base_seed)?.finish(investor_closed_form(config)))
}

/// Parameters a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    GammaInvestor,
    GammaManager,
    /// Threshold of an all-or-nothing policy.
    Mu,
    Mu1,
    Mu2,
    Mu3,
    /// The Investor's true success frequency under an honest Manager; the
    /// same quantity as `PsiBase`.
    AlphaSuccess,
    PsiBase,
    /// Replaces the cost distribution with a point mass at the value.
    CostPoint,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 9] = [
        Self::GammaInvestor,
        Self::GammaManager,
        Self::Mu,
        Self::Mu1,
        Self::Mu2,
        Self::Mu3,
        Self::AlphaSuccess,
        Self::PsiBase,
        Self::CostPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::GammaInvestor => "gamma_investor",
            Self::GammaManager => "gamma_manager",
            Self::Mu => "mu",
            Self::Mu1 => "mu1",
            Self::Mu2 => "mu2",
            Self::Mu3 => "mu3",
            Self::AlphaSuccess => "alpha_success",
            Self::PsiBase => "psi_base",
            Self::CostPoint => "cost_point",
        }
    }

    /// `config` with this parameter set to `value`, validated.
    pub fn apply(self, config: &EpisodeConfig, value: f64) -> Result<EpisodeConfig> {
        let mut out = *config;
        let tiers = |policy: &InvestorPolicy| match *policy {
            InvestorPolicy::Tiered { mu1, mu2, mu3 } => Ok((mu1, mu2, mu3)),
            InvestorPolicy::AllOrNothing { .. } => Err(Error::Config(format!(
                "parameter {} requires a tiered investor policy",
                self.name()
            ))),
        };
        match self {
            Self::GammaInvestor => {
                out.players.investor.perception = PerceptionMatrix::new(value)?;
            }
            Self::GammaManager => {
                out.players.manager.perception = PerceptionMatrix::new(value)?;
            }
            Self::Mu => {
                if let InvestorPolicy::Tiered { .. } = config.policies.investor {
                    return Err(Error::Config(
                        "parameter mu requires an all_or_nothing investor policy".into(),
                    ));
                }
                out.policies.investor = InvestorPolicy::all_or_nothing(value)?;
            }
            Self::Mu1 => {
                let (_, mu2, mu3) = tiers(&config.policies.investor)?;
                out.policies.investor = InvestorPolicy::tiered(value, mu2, mu3)?;
            }
            Self::Mu2 => {
                let (mu1, _, mu3) = tiers(&config.policies.investor)?;
                out.policies.investor = InvestorPolicy::tiered(mu1, value, mu3)?;
            }
            Self::Mu3 => {
                let (mu1, mu2, _) = tiers(&config.policies.investor)?;
                out.policies.investor = InvestorPolicy::tiered(mu1, mu2, value)?;
            }
            Self::AlphaSuccess | Self::PsiBase => {
                crate::error::check_closed(self.name(), value, 0.0, 1.0, "ψ⁰ ∈ [0; 1]")?;
                out.success.base_success = value;
            }
            Self::CostPoint => {
                out.policies.manager.cost = CostDistribution::point_mass(value)?;
            }
        }
        out.validate()?;
        Ok(out)
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
                Error::Config(format!(
                    "unknown sweep parameter `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
    pub replications: u64,
    pub rounds: u64,
    pub base_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub point_index: usize,
    pub parameter: &'static str,
    pub value: f64,
    pub seed: u64,
    #[serde(flatten)]
    pub stats: AggregateStats,
}

/// One row per grid point, in grid order. Point `v` runs
/// `run_replications(config at v, replications, point_seed(base_seed, v))`.
pub fn sweep(base: &EpisodeConfig, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.grid.is_empty() {
        return Err(Error::Config(
            "sweep grid must contain at least one value".into(),
        ));
    }
    if spec.replications == 0 {
        return Err(Error::OutOfRange {
            name: "replications",
            value: 0.0,
            constraint: "replications ≥ 1",
        });
    }
    let mut base = *base;
    base.rounds = spec.rounds;
    // validate the whole grid before running anything
    let points = spec
        .grid
        .iter()
        .map(|&v| spec.parameter.apply(&base, v))
        .collect::<Result<Vec<_>>>()?;
    points
        .iter()
        .zip(&spec.grid)
        .enumerate()
        .map(|(point_index, (config, &value))| {
            let seed = point_seed(spec.base_seed, value);
            Ok(SweepRow {
                point_index,
                parameter: spec.parameter.name(),
                value,
                seed,
                stats: run_replications(config, spec.replications, seed)?,
            })
        })
        .collect()
}

/// Monte Carlo estimate of recalled success share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    /// Experiences that entered either count.
    pub recorded: u64,
    pub samples: u64,
}

/// Brute-force counterpart of [`asymptotic_confidence`]: samples outcomes
/// from `freq`, impulses from `matrix`, recalls through `recollection`, and
/// returns the recorded-success ratio with its binomial standard error.
pub fn empirical_confidence_oracle(
    freq: &TrueFrequencies,
    matrix: &PerceptionMatrix,
    recollection: &RecollectionProcess,
    n_samples: u64,
    seed: u64,
) -> Result<OracleEstimate> {
    if n_samples == 0 {
        return Err(Error::OutOfRange {
            name: "n_samples",
            value: 0.0,
            constraint: "n_samples ≥ 1",
        });
    }
    let mut rng = Stream::from_key(mix64(seed));
    let mut counts = MemoryCounts::default();
    for _ in 0..n_samples {
        let outcome = if rng.random::<f64>() < freq.p_success() {
            Outcome::Success
        } else {
            Outcome::Failure
        };
        let impulse = sample_impulse(outcome, matrix, &mut rng);
        counts = record_experience(
            counts,
            Experience { outcome, impulse },
            recollection,
            &mut rng,
        );
    }
    let recorded = counts.total();
    if recorded == 0 {
        return Err(Error::NoData(format!(
            "none of {n_samples} sampled experiences was recalled"
        )));
    }
    let estimate = counts.successes as f64 / recorded as f64;
    Ok(OracleEstimate {
        estimate,
        standard_error: (estimate * (1.0 - estimate) / recorded as f64).sqrt(),
        recorded,
        samples: n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::ManagerPolicy;
    use crate::engine::{PlayerState, Players, Policies, SuccessModel};
    use crate::perception::default_recollection;

    fn honest(gamma: f64) -> EpisodeConfig {
        EpisodeConfig {
            players: Players {
                investor: PlayerState {
                    counts: MemoryCounts::new(50, 0),
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
            rounds: 200,
        }
    }

    #[test]
    fn exact_sum_beats_naive_rounding() {
        let mut s = ExactSum::default();
        for x in [1e100, 1.0, -1e100, 1e-100] {
            s.add(x);
        }
        assert_eq!(s.value(), 1.0);
        let mut t = ExactSum::default();
        for _ in 0..10 {
            t.add(0.1);
        }
        assert_eq!(t.value(), 1.0);
    }

    #[test]
    fn exact_sum_merge_is_grouping_free() {
        let xs: Vec<f64> = (0..500)
            .map(|i| ((i * 7919) % 1000) as f64 / 997.0)
            .collect();
        let mut whole = ExactSum::default();
        xs.iter().for_each(|&x| whole.add(x));
        let mut merged = ExactSum::default();
        for chunk in xs.chunks(37).rev() {
            let mut part = ExactSum::default();
            chunk.iter().for_each(|&x| part.add(x));
            merged.merge(&part);
        }
        assert_eq!(whole.value(), merged.value());
        assert_eq!(whole, merged);
        merged.add(1e-300);
        assert_ne!(whole, merged);
    }

    #[test]
    fn single_replication_has_no_standard_error() {
        let config = honest(0.0);
        let agg = run_replications(&config, 1, 9).unwrap();
        let single = EpisodeStats::simulate(&config, replication_seed(9, 0)).unwrap();
        assert_eq!(agg.episodes, 1);
        assert_eq!(agg.mean_p0, single.final_p0);
        assert_eq!(agg.mean_p1, single.final_p1);
        assert!(agg.se_p0.is_none() && agg.se_p1.is_none());
        assert_eq!(agg.invested_rounds, single.invested_rounds);
    }

    #[test]
    fn replications_are_deterministic() {
        let config = honest(0.5);
        assert_eq!(
            run_replications(&config, 20, 3).unwrap(),
            run_replications(&config, 20, 3).unwrap()
        );
        assert!(run_replications(&config, 0, 3).is_err());
    }

    #[test]
    fn closed_form_column() {
        assert_eq!(investor_closed_form(&honest(0.0)), Some(0.6));
        assert!((investor_closed_form(&honest(0.5)).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(investor_closed_form(&honest(1.0)), Some(1.0));
        let mut degenerate = honest(1.0);
        degenerate.success.base_success = 0.0;
        assert_eq!(investor_closed_form(&degenerate), None);
    }

    #[test]
    fn sweep_rejects_empty_grid_and_bad_values() {
        let spec = SweepSpec {
            parameter: SweepParameter::GammaInvestor,
            grid: vec![],
            replications: 2,
            rounds: 10,
            base_seed: 1,
        };
        assert!(sweep(&honest(0.0), &spec).is_err());
        let bad = SweepSpec {
            grid: vec![0.5, 1.5],
            ..spec.clone()
        };
        let err = sweep(&honest(0.0), &bad).unwrap_err();
        assert!(err.to_string().contains("γ ∈ [0; 1]"), "{err}");
        let mu = SweepSpec {
            parameter: SweepParameter::Mu,
            grid: vec![0.4],
            ..spec
        };
        let err = sweep(&honest(0.0), &mu).unwrap_err();
        assert!(err.to_string().contains("μ ∈ (0.5; 1]"), "{err}");
    }

    #[test]
    fn tier_parameters_need_tiered_policy() {
        assert!(SweepParameter::Mu2.apply(&honest(0.0), 0.7).is_err());
        let mut tiered = honest(0.0);
        tiered.policies.investor = InvestorPolicy::tiered(0.6, 0.7, 0.85).unwrap();
        let out = SweepParameter::Mu2.apply(&tiered, 0.75).unwrap();
        assert_eq!(
            out.policies.investor,
            InvestorPolicy::Tiered {
                mu1: 0.6,
                mu2: 0.75,
                mu3: 0.85
            }
        );
        assert!(SweepParameter::Mu.apply(&tiered, 0.7).is_err());
        let err = SweepParameter::Mu2.apply(&tiered, 0.9).unwrap_err();
        assert!(err.to_string().contains("μ² ∈ (0.65; 0.8]"));
    }

    #[test]
    fn parameter_names_round_trip() {
        for p in SweepParameter::ALL {
            assert_eq!(p.name().parse::<SweepParameter>().unwrap(), p);
        }
        assert!("gamma".parse::<SweepParameter>().is_err());
    }

    #[test]
    fn one_point_sweep_equals_replications() {
        let spec = SweepSpec {
            parameter: SweepParameter::GammaInvestor,
            grid: vec![0.25],
            replications: 5,
            rounds: 100,
            base_seed: 77,
        };
        let rows = sweep(&honest(0.0), &spec).unwrap();
        assert_eq!(rows.len(), 1);
        let mut point = SweepParameter::GammaInvestor
            .apply(&honest(0.0), 0.25)
            .unwrap();
        point.rounds = 100;
        let direct = run_replications(&point, 5, point_seed(77, 0.25)).unwrap();
        assert_eq!(rows[0].stats, direct);
    }

    #[test]
    fn grid_order_does_not_change_points() {
        let spec = SweepSpec {
            parameter: SweepParameter::GammaInvestor,
            grid: vec![0.0, 0.5, 1.0],
            replications: 4,
            rounds: 80,
            base_seed: 5,
        };
        let forward = sweep(&honest(0.0), &spec).unwrap();
        let reversed = sweep(
            &honest(0.0),
            &SweepSpec {
                grid: vec![1.0, 0.5, 0.0],
                ..spec
            },
        )
        .unwrap();
        for row in &forward {
            let twin = reversed.iter().find(|r| r.value == row.value).unwrap();
            assert_eq!(twin.stats, row.stats);
        }
    }

    #[test]
    fn oracle_edge_cases() {
        let g = default_recollection();
        let m = PerceptionMatrix::new(0.7).unwrap();
        let only_success = TrueFrequencies::new(1.0).unwrap();
        let est = empirical_confidence_oracle(&only_success, &m, &g, 1000, 1).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.standard_error, 0.0);

        let all_fail = TrueFrequencies::new(0.0).unwrap();
        let blind = PerceptionMatrix::new(1.0).unwrap();
        assert!(matches!(
            empirical_confidence_oracle(&all_fail, &blind, &g, 1000, 1),
            Err(Error::NoData(_))
        ));
        assert!(empirical_confidence_oracle(&all_fail, &m, &g, 0, 1).is_err());
    }

    #[test]
    fn oracle_recovers_distorted_confidence() {
        let g = default_recollection();
        let m = PerceptionMatrix::new(0.5).unwrap();
        let freq = TrueFrequencies::new(0.6).unwrap();
        let est = empirical_confidence_oracle(&freq, &m, &g, 100_000, 2024).unwrap();
        assert!((est.estimate - 0.75).abs() < 0.005, "{est:?}");
    }
}
