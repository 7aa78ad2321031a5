//! Distorted perception and recall of outcomes.
//!
//! Every realized outcome produces an impulse: `Normal` when the agent
//! attributes it correctly, `Misattributed` when it is written off to abnormal
//! circumstances. The perception matrix gives the impulse distribution per
//! outcome; the recollection process decides which memory count, if any, an
//! experience `(outcome, impulse)` lands in.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::belief::MemoryCounts;
use crate::error::{check_probability, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Failure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Impulse {
    Normal,
    Misattributed,
}

/// The memory count an experience may be recalled into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bucket {
    Success,
    Failure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Experience {
    pub outcome: Outcome,
    pub impulse: Impulse,
}

/// Row-stochastic map from outcomes to impulses. Successes are always
/// perceived normally; a failure is misattributed with probability `gamma`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PerceptionMatrix {
    gamma: f64,
}

impl PerceptionMatrix {
    pub fn new(gamma: f64) -> Result<Self> {
        crate::error::check_closed("gamma", gamma, 0.0, 1.0, "γ ∈ [0; 1]")?;
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `u[outcome, impulse]`.
    pub fn probability(&self, outcome: Outcome, impulse: Impulse) -> f64 {
        match (outcome, impulse) {
            (Outcome::Success, Impulse::Normal) => 1.0,
            (Outcome::Success, Impulse::Misattributed) => 0.0,
            (Outcome::Failure, Impulse::Normal) => 1.0 - self.gamma,
            (Outcome::Failure, Impulse::Misattributed) => self.gamma,
        }
    }

    pub fn row(&self, outcome: Outcome) -> [f64; 2] {
        [
            self.probability(outcome, Impulse::Normal),
            self.probability(outcome, Impulse::Misattributed),
        ]
    }
}

/// Inclusion probabilities of each experience into each memory count.
///
/// Rows are indexed by experience, each holding `[to_success, to_failure]`;
/// the two entries sum to at most one, so an experience enters at most one
/// count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecollectionProcess {
    success_normal: [f64; 2],
    success_misattributed: [f64; 2],
    failure_normal: [f64; 2],
    failure_misattributed: [f64; 2],
}

impl Default for RecollectionProcess {
    fn default() -> Self {
        default_recollection()
    }
}

/// Only normally-perceived outcomes are remembered, each in its own count.
pub fn default_recollection() -> RecollectionProcess {
    RecollectionProcess {
        success_normal: [1.0, 0.0],
        success_misattributed: [0.0, 0.0],
        failure_normal: [0.0, 1.0],
        failure_misattributed: [0.0, 0.0],
    }
}

impl RecollectionProcess {
    pub fn new(
        success_normal: [f64; 2],
        success_misattributed: [f64; 2],
        failure_normal: [f64; 2],
        failure_misattributed: [f64; 2],
    ) -> Result<Self> {
        for (name, row) in [
            ("recollection.success_normal", success_normal),
            ("recollection.success_misattributed", success_misattributed),
            ("recollection.failure_normal", failure_normal),
            ("recollection.failure_misattributed", failure_misattributed),
        ] {
            check_probability(name, row[0])?;
            check_probability(name, row[1])?;
            let total = row[0] + row[1];
            if total > 1.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: total,
                    constraint: "g(w → s) + g(w → f) ≤ 1",
                });
            }
        }
        Ok(Self {
            success_normal,
            success_misattributed,
            failure_normal,
            failure_misattributed,
        })
    }

    pub fn row(&self, outcome: Outcome, impulse: Impulse) -> [f64; 2] {
        match (outcome, impulse) {
            (Outcome::Success, Impulse::Normal) => self.success_normal,
            (Outcome::Success, Impulse::Misattributed) => self.success_misattributed,
            (Outcome::Failure, Impulse::Normal) => self.failure_normal,
            (Outcome::Failure, Impulse::Misattributed) => self.failure_misattributed,
        }
    }

    pub fn weight(&self, outcome: Outcome, impulse: Impulse, bucket: Bucket) -> f64 {
        let row = self.row(outcome, impulse);
        match bucket {
            Bucket::Success => row[0],
            Bucket::Failure => row[1],
        }
    }
}

/// Objective outcome distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrueFrequencies {
    p_success: f64,
}

impl TrueFrequencies {
    pub fn new(p_success: f64) -> Result<Self> {
        crate::error::check_closed("alpha_success", p_success, 0.0, 1.0, "α_S ∈ [0; 1]")?;
        Ok(Self { p_success })
    }

    pub fn p_success(&self) -> f64 {
        self.p_success
    }

    pub fn p_failure(&self) -> f64 {
        1.0 - self.p_success
    }

    pub fn probability(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Success => self.p_success(),
            Outcome::Failure => self.p_failure(),
        }
    }
}

/// Draws the impulse an outcome produces. Consumes one uniform draw.
pub fn sample_impulse<R: Rng + ?Sized>(
    outcome: Outcome,
    matrix: &PerceptionMatrix,
    rng: &mut R,
) -> Impulse {
    let u: f64 = rng.random();
    if u < matrix.probability(outcome, Impulse::Normal) {
        Impulse::Normal
    } else {
        Impulse::Misattributed
    }
}

/// Adds an experience to memory according to the recollection process.
/// Consumes one uniform draw; with indicator weights the result is
/// deterministic.
pub fn record_experience<R: Rng + ?Sized>(
    counts: MemoryCounts,
    experience: Experience,
    recollection: &RecollectionProcess,
    rng: &mut R,
) -> MemoryCounts {
    let [to_success, to_failure] = recollection.row(experience.outcome, experience.impulse);
    let u: f64 = rng.random();
    let mut next = counts;
    if u < to_success {
        next.successes += 1;
    } else if u < to_success + to_failure {
        next.failures += 1;
    }
    next
}

const OUTCOMES: [Outcome; 2] = [Outcome::Success, Outcome::Failure];
const IMPULSES: [Impulse; 2] = [Impulse::Normal, Impulse::Misattributed];

/// Expected contribution of one experience to `bucket`:
/// `Σ_(x,y) g((x,y) → bucket) · u[x, y] · α_x`.
pub fn expected_count(
    matrix: &PerceptionMatrix,
    recollection: &RecollectionProcess,
    freq: &TrueFrequencies,
    bucket: Bucket,
) -> f64 {
    let mut total = 0.0;
    for outcome in OUTCOMES {
        for impulse in IMPULSES {
            total += recollection.weight(outcome, impulse, bucket)
                * matrix.probability(outcome, impulse)
                * freq.probability(outcome);
        }
    }
    total
}

/// Long-run confidence `E δ(s) / (E δ(s) + E δ(f))`, the value recalled
/// confidence settles at as experience accumulates. Shared by both agents.
pub fn asymptotic_confidence(
    matrix: &PerceptionMatrix,
    recollection: &RecollectionProcess,
    freq: &TrueFrequencies,
) -> Result<f64> {
    let successes = expected_count(matrix, recollection, freq, Bucket::Success);
    let failures = expected_count(matrix, recollection, freq, Bucket::Failure);
    let denominator = successes + failures;
    if denominator > 0.0 {
        Ok(successes / denominator)
    } else {
        Err(Error::Degenerate(format!(
            "no experience is ever recalled (γ = {}, α_S = {})",
            matrix.gamma(),
            freq.p_success()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    fn freq(p: f64) -> TrueFrequencies {
        TrueFrequencies::new(p).unwrap()
    }

    #[test]
    fn default_recollection_is_indicator() {
        let g = default_recollection();
        assert_eq!(
            g.weight(Outcome::Success, Impulse::Normal, Bucket::Success),
            1.0
        );
        assert_eq!(
            g.weight(Outcome::Failure, Impulse::Misattributed, Bucket::Failure),
            0.0
        );
        assert_eq!(
            g.weight(Outcome::Success, Impulse::Normal, Bucket::Failure),
            0.0
        );
        assert_eq!(
            g.weight(Outcome::Failure, Impulse::Normal, Bucket::Failure),
            1.0
        );
        for outcome in OUTCOMES {
            for bucket in [Bucket::Success, Bucket::Failure] {
                assert_eq!(g.weight(outcome, Impulse::Misattributed, bucket), 0.0);
            }
        }
    }

    #[test]
    fn matrix_rejects_out_of_range() {
        assert!(PerceptionMatrix::new(-0.1).is_err());
        assert!(PerceptionMatrix::new(1.1).is_err());
        assert!(PerceptionMatrix::new(f64::NAN).is_err());
    }

    #[test]
    fn recollection_rejects_overfull_row() {
        let err = RecollectionProcess::new([0.7, 0.4], [0.0; 2], [0.0, 1.0], [0.0; 2]).unwrap_err();
        assert!(err.to_string().contains("≤ 1"), "{err}");
        assert!(RecollectionProcess::new([1.2, 0.0], [0.0; 2], [0.0; 2], [0.0; 2]).is_err());
    }

    #[test]
    fn success_always_normal() {
        let mut rng = Stream::from_key(1);
        let m = PerceptionMatrix::new(0.9).unwrap();
        for _ in 0..1000 {
            assert_eq!(
                sample_impulse(Outcome::Success, &m, &mut rng),
                Impulse::Normal
            );
        }
    }

    #[test]
    fn undistorted_failures_normal() {
        let mut rng = Stream::from_key(2);
        let m = PerceptionMatrix::new(0.0).unwrap();
        for _ in 0..1000 {
            assert_eq!(
                sample_impulse(Outcome::Failure, &m, &mut rng),
                Impulse::Normal
            );
        }
    }

    #[test]
    fn half_of_failures_misattributed() {
        let mut rng = Stream::from_key(3);
        let m = PerceptionMatrix::new(0.5).unwrap();
        let n = 100_000;
        let mis = (0..n)
            .filter(|_| sample_impulse(Outcome::Failure, &m, &mut rng) == Impulse::Misattributed)
            .count();
        let rate = mis as f64 / n as f64;
        assert!((rate - 0.5).abs() < 0.01, "{rate}");
    }

    #[test]
    fn recording_with_default_recollection() {
        let g = default_recollection();
        let mut rng = Stream::from_key(4);
        let exp = |outcome, impulse| Experience { outcome, impulse };
        assert_eq!(
            record_experience(
                MemoryCounts::new(2, 1),
                exp(Outcome::Success, Impulse::Normal),
                &g,
                &mut rng
            ),
            MemoryCounts::new(3, 1)
        );
        assert_eq!(
            record_experience(
                MemoryCounts::new(2, 1),
                exp(Outcome::Failure, Impulse::Misattributed),
                &g,
                &mut rng
            ),
            MemoryCounts::new(2, 1)
        );
        assert_eq!(
            record_experience(
                MemoryCounts::new(0, 0),
                exp(Outcome::Failure, Impulse::Normal),
                &g,
                &mut rng
            ),
            MemoryCounts::new(0, 1)
        );
    }

    #[test]
    fn partial_recall_is_probabilistic() {
        let g = RecollectionProcess::new([0.25, 0.0], [0.0; 2], [0.0, 1.0], [0.0; 2]).unwrap();
        let mut rng = Stream::from_key(5);
        let mut counts = MemoryCounts::default();
        let exp = Experience {
            outcome: Outcome::Success,
            impulse: Impulse::Normal,
        };
        for _ in 0..40_000 {
            counts = record_experience(counts, exp, &g, &mut rng);
        }
        assert_eq!(counts.failures, 0);
        let rate = counts.successes as f64 / 40_000.0;
        assert!((rate - 0.25).abs() < 0.01, "{rate}");
    }

    #[test]
    fn expected_counts() {
        let g = default_recollection();
        let half = PerceptionMatrix::new(0.5).unwrap();
        let clear = PerceptionMatrix::new(0.0).unwrap();
        let a = freq(0.6);
        assert!((expected_count(&half, &g, &a, Bucket::Success) - 0.6).abs() < 1e-15);
        assert!((expected_count(&half, &g, &a, Bucket::Failure) - 0.2).abs() < 1e-15);
        assert!((expected_count(&clear, &g, &a, Bucket::Failure) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_confidence_cases() {
        let g = default_recollection();
        let a = freq(0.6);
        let at = |gamma| asymptotic_confidence(&PerceptionMatrix::new(gamma).unwrap(), &g, &a);
        assert_eq!(at(0.0).unwrap(), 0.6);
        assert!((at(0.5).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(at(1.0).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_when_nothing_recalled() {
        let g = default_recollection();
        let m = PerceptionMatrix::new(1.0).unwrap();
        let err = asymptotic_confidence(&m, &g, &freq(0.0)).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn asymptotic_increases_with_gamma() {
        let g = default_recollection();
        let a = freq(0.3);
        let mut last = 0.0;
        for i in 0..=100 {
            let m = PerceptionMatrix::new(i as f64 / 100.0).unwrap();
            let p = asymptotic_confidence(&m, &g, &a).unwrap();
            assert!(p > last);
            last = p;
        }
    }
}
