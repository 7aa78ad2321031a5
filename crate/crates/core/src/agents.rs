//! Decision rules of the Investor and the Project Manager.

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{check_closed, check_left_open, check_probability, Error, Result};

/// How much of the available funds the Investor commits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvestmentDecision {
    Abstain,
    OneThird,
    TwoThirds,
    Full,
}

impl InvestmentDecision {
    /// Committed fraction in thirds of the available funds.
    pub fn thirds(self) -> u8 {
        match self {
            Self::Abstain => 0,
            Self::OneThird => 1,
            Self::TwoThirds => 2,
            Self::Full => 3,
        }
    }

    pub fn fraction(self) -> f64 {
        self.thirds() as f64 / 3.0
    }

    pub fn invests(self) -> bool {
        self != Self::Abstain
    }

    pub fn from_thirds(thirds: u8) -> Option<Self> {
        match thirds {
            0 => Some(Self::Abstain),
            1 => Some(Self::OneThird),
            2 => Some(Self::TwoThirds),
            3 => Some(Self::Full),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InvestorPolicy {
    /// Invest everything iff `p0 ≥ mu`.
    AllOrNothing { mu: f64 },
    /// Invest 1/3, 2/3 or everything as `p0` clears `mu1`, `mu2`, `mu3`.
    Tiered { mu1: f64, mu2: f64, mu3: f64 },
}

impl InvestorPolicy {
    pub fn all_or_nothing(mu: f64) -> Result<Self> {
        check_left_open("mu", mu, 0.5, 1.0, "μ ∈ (0.5; 1]")?;
        Ok(Self::AllOrNothing { mu })
    }

    pub fn tiered(mu1: f64, mu2: f64, mu3: f64) -> Result<Self> {
        check_left_open("mu1", mu1, 0.5, 0.65, "μ¹ ∈ (0.5; 0.65]")?;
        check_left_open("mu2", mu2, 0.65, 0.8, "μ² ∈ (0.65; 0.8]")?;
        check_left_open("mu3", mu3, 0.8, 1.0, "μ³ ∈ (0.8; 1]")?;
        Ok(Self::Tiered { mu1, mu2, mu3 })
    }

    /// Re-checks the interval constraints, for values built by hand.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::AllOrNothing { mu } => Self::all_or_nothing(mu).map(drop),
            Self::Tiered { mu1, mu2, mu3 } => Self::tiered(mu1, mu2, mu3).map(drop),
        }
    }
}

/// The Investor's rule. Every threshold is an inclusive lower bound.
pub fn decide_investment(p0: f64, policy: &InvestorPolicy) -> Result<InvestmentDecision> {
    check_probability("p0", p0)?;
    Ok(match *policy {
        InvestorPolicy::AllOrNothing { mu } => {
            if p0 >= mu {
                InvestmentDecision::Full
            } else {
                InvestmentDecision::Abstain
            }
        }
        InvestorPolicy::Tiered { mu1, mu2, mu3 } => {
            if p0 >= mu3 {
                InvestmentDecision::Full
            } else if p0 >= mu2 {
                InvestmentDecision::TwoThirds
            } else if p0 >= mu1 {
                InvestmentDecision::OneThird
            } else {
                InvestmentDecision::Abstain
            }
        }
    })
}

/// Distribution of the Manager's cost of embezzlement, supported on `[0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub enum CostDistribution {
    #[default]
    Uniform,
    PointMass(f64),
    Beta {
        alpha: f64,
        beta: f64,
    },
}

impl CostDistribution {
    pub fn point_mass(value: f64) -> Result<Self> {
        check_closed("cost.value", value, 0.0, 1.0, "h ∈ [0; 1]")?;
        Ok(Self::PointMass(value))
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("cost.alpha", alpha), ("cost.beta", beta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    constraint: "Beta shape > 0",
                });
            }
        }
        Ok(Self::Beta { alpha, beta })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Uniform => Ok(()),
            Self::PointMass(v) => Self::point_mass(v).map(drop),
            Self::Beta { alpha, beta } => Self::beta(alpha, beta).map(drop),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Uniform => 0.5,
            Self::PointMass(v) => v,
            Self::Beta { alpha, beta } => alpha / (alpha + beta),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ManagerPolicy {
    pub cost: CostDistribution,
}

/// Draws the cost level `h`. The uniform default consumes exactly one draw.
pub fn draw_cost<R: Rng + ?Sized>(policy: &ManagerPolicy, rng: &mut R) -> f64 {
    match policy.cost {
        CostDistribution::Uniform => rng.random::<f64>(),
        CostDistribution::PointMass(v) => v,
        CostDistribution::Beta { alpha, beta } => Beta::new(alpha, beta)
            .expect("shape parameters validated at construction")
            .sample(rng),
    }
}

/// The Manager embezzles iff confidence covers the cost, `p1 ≥ h`.
pub fn decide_embezzlement(p1: f64, h: f64) -> Result<bool> {
    check_probability("p1", p1)?;
    check_closed("h", h, 0.0, 1.0, "h ∈ [0; 1]")?;
    Ok(p1 >= h)
}
