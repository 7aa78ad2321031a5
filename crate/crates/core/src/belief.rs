//! Confidence formation from remembered outcomes.
//!
//! An agent's confidence is a function of its remembered success and failure
//! counts. Any such function should satisfy three axioms:
//!
//! 1. it lies strictly inside `(0, 1)`;
//! 2. it increases with successes and decreases with failures;
//! 3. `β(a·f, f) → a / (a + 1)` as `f → ∞`, i.e. confidence approaches the
//!    empirical success frequency.
//!
//! The concrete family used throughout is the Laplace-smoothed frequency
//! `(s + ε_s) / (s + f + ε_s + ε_f)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Success/failure tallies an agent actually recalls.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MemoryCounts {
    pub successes: u64,
    pub failures: u64,
}

impl MemoryCounts {
    pub const fn new(successes: u64, failures: u64) -> Self {
        Self {
            successes,
            failures,
        }
    }

    pub fn total(&self) -> u64 {
        self.successes + self.failures
    }
}

/// A confidence function over (possibly fractional) memory counts.
pub trait ConfidenceFunction {
    fn evaluate(&self, successes: f64, failures: f64) -> f64;
}

/// Pseudo-counts of the smoothed-frequency confidence function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefParams {
    prior_success: f64,
    prior_failure: f64,
}

impl Default for BeliefParams {
    fn default() -> Self {
        Self {
            prior_success: 1.0,
            prior_failure: 1.0,
        }
    }
}

impl BeliefParams {
    pub fn new(prior_success: f64, prior_failure: f64) -> Result<Self> {
        for (name, value) in [
            ("prior_success", prior_success),
            ("prior_failure", prior_failure),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    constraint: "ε > 0",
                });
            }
        }
        Ok(Self {
            prior_success,
            prior_failure,
        })
    }

    pub fn prior_success(&self) -> f64 {
        self.prior_success
    }

    pub fn prior_failure(&self) -> f64 {
        self.prior_failure
    }

    /// Confidence at real-valued counts, e.g. expected counts. Counts must be
    /// non-negative.
    pub fn confidence_at(&self, successes: f64, failures: f64) -> Result<f64> {
        for (name, value) in [("successes", successes), ("failures", failures)] {
            if value.is_nan() || value < 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    constraint: "count ≥ 0",
                });
            }
        }
        Ok(self.evaluate(successes, failures))
    }
}

impl ConfidenceFunction for BeliefParams {
    fn evaluate(&self, successes: f64, failures: f64) -> f64 {
        (successes + self.prior_success)
            / (successes + failures + self.prior_success + self.prior_failure)
    }
}

/// Confidence of an agent holding `counts` in memory.
pub fn confidence(counts: MemoryCounts, params: &BeliefParams) -> f64 {
    params.evaluate(counts.successes as f64, counts.failures as f64)
}

/// Outcome of checking one axiom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub passed: bool,
    /// Worst case observed: the smallest margin for axioms 1 and 2, the
    /// largest limit deviation at `f_max` for axiom 3.
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    /// `0 < β < 1` on the grid `s, f ∈ [0, f_max]`; worst is `min(β, 1 − β)`.
    pub bounded: AxiomCheck,
    /// Strict monotonicity on the grid; worst is the smallest step in the
    /// required direction.
    pub monotone: AxiomCheck,
    /// Limit deviation `|β(a·f, f) − a/(a+1)|` non-increasing over
    /// `f ∈ [1, f_max]` and at most `tolerance` at `f_max` for every `a`.
    pub limit: AxiomCheck,
    pub limit_tolerance: f64,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.bounded.passed && self.monotone.passed && self.limit.passed
    }
}

/// Checks the three axioms of a confidence function over a grid.
///
/// The limit axiom evaluates `β(a·f, f)` with real-valued `a·f`; its tolerance
/// at `f_max` is `2 / f_max`.
pub fn verify_axioms<B: ConfidenceFunction + ?Sized>(
    belief: &B,
    a_values: &[f64],
    f_max: u64,
) -> Result<AxiomReport> {
    if a_values.is_empty() {
        return Err(Error::Config("a_values must be non-empty".into()));
    }
    if f_max == 0 {
        return Err(Error::OutOfRange {
            name: "f_max",
            value: 0.0,
            constraint: "f_max ≥ 1",
        });
    }
    for &a in a_values {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
                constraint: "a > 0",
            });
        }
    }

    let mut bounded = AxiomCheck {
        passed: true,
        worst: f64::INFINITY,
    };
    let mut monotone = AxiomCheck {
        passed: true,
        worst: f64::INFINITY,
    };
    for s in 0..=f_max {
        let s = s as f64;
        for f in 0..=f_max {
            let f = f as f64;
            let here = belief.evaluate(s, f);
            let margin = here.min(1.0 - here);
            bounded.worst = bounded.worst.min(margin);
            if !(here > 0.0 && here < 1.0) {
                bounded.passed = false;
            }
            let up = belief.evaluate(s + 1.0, f) - here;
            let down = here - belief.evaluate(s, f + 1.0);
            let step = up.min(down);
            monotone.worst = monotone.worst.min(step);
            if step.is_nan() || step <= 0.0 {
                monotone.passed = false;
            }
        }
    }

    let tolerance = 2.0 / f_max as f64;
    let mut limit = AxiomCheck {
        passed: true,
        worst: 0.0,
    };
    for &a in a_values {
        let target = a / (a + 1.0);
        let mut previous = f64::INFINITY;
        for f in 1..=f_max {
            let f = f as f64;
            let deviation = (belief.evaluate(a * f, f) - target).abs();
            if deviation > previous {
                limit.passed = false;
            }
            previous = deviation;
        }
        limit.worst = limit.worst.max(previous);
        if previous.is_nan() || previous > tolerance {
            limit.passed = false;
        }
    }

    Ok(AxiomReport {
        bounded,
        monotone,
        limit,
        limit_tolerance: tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_evidence_is_even() {
        let p = confidence(MemoryCounts::new(0, 0), &BeliefParams::default());
        assert_eq!(p, 0.5);
    }

    #[test]
    fn three_to_one() {
        let p = confidence(MemoryCounts::new(3, 1), &BeliefParams::default());
        assert!((p - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn large_counts_approach_frequency() {
        let p = confidence(MemoryCounts::new(2000, 1000), &BeliefParams::default());
        assert!((p - 2001.0 / 3002.0).abs() < 1e-15);
        assert!((p - 2.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_non_positive_priors() {
        assert!(BeliefParams::new(0.0, 1.0).is_err());
        assert!(BeliefParams::new(1.0, -2.0).is_err());
        assert!(BeliefParams::new(f64::NAN, 1.0).is_err());
        let err = BeliefParams::new(0.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("ε > 0"), "{err}");
    }

    #[test]
    fn real_counts_reject_negatives() {
        let b = BeliefParams::default();
        assert!(b.confidence_at(-1.0, 0.0).is_err());
        assert_eq!(b.confidence_at(0.6, 0.2).unwrap(), 1.6 / 2.8);
    }

    #[test]
    fn even_odds_has_zero_limit_deviation() {
        let report = verify_axioms(&BeliefParams::default(), &[1.0], 1000).unwrap();
        assert!(report.all_passed());
        assert_eq!(report.limit.worst, 0.0);
    }

    #[test]
    fn limit_deviation_matches_closed_form() {
        let a: f64 = 5.0;
        let f = 1000.0;
        let expected = (1.0 - a).abs() / ((a + 1.0) * ((a + 1.0) * f + 2.0));
        let report = verify_axioms(&BeliefParams::default(), &[a], 1000).unwrap();
        assert!(report.all_passed());
        assert!((report.limit.worst - expected).abs() < 1e-15);
        assert!((report.limit.worst - 1.1107e-4).abs() < 1e-7);
    }

    #[test]
    fn fractional_and_double_odds_pass() {
        let report = verify_axioms(&BeliefParams::default(), &[0.5, 2.0], 100).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    struct Frequency;
    impl ConfidenceFunction for Frequency {
        fn evaluate(&self, s: f64, f: f64) -> f64 {
            if s + f == 0.0 {
                0.5
            } else {
                s / (s + f)
            }
        }
    }

    #[test]
    fn raw_frequency_fails_boundedness() {
        let report = verify_axioms(&Frequency, &[1.0], 10).unwrap();
        assert!(!report.bounded.passed);
        assert!(!report.monotone.passed);
    }

    #[test]
    fn rejects_bad_grid() {
        let b = BeliefParams::default();
        assert!(verify_axioms(&b, &[], 10).is_err());
        assert!(verify_axioms(&b, &[1.0], 0).is_err());
        assert!(verify_axioms(&b, &[-1.0], 10).is_err());
    }
}
