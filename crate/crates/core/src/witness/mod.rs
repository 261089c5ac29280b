//! A falsification harness for continuity and differentiability claims.
//!
//! Probes can refute a claim with a concrete witness point or report that
//! the claim survived a finite budget. They never prove anything.

mod ladder;
mod probe;
mod spot;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enclosure::{ratio_serde, ratio_vec_serde, Enclosure};
use crate::points::{pow3, TaggedPoint};
use crate::Q;

pub use ladder::{ladder_points, simplest_between, LadderKind};
pub use probe::{continuity_probe, diff_quotients, discontinuity_witness, QuotientScan, WitnessBudget};
pub use spot::{
    default_spot_plans, signature_spot_check, spot_check_expr, Claim, ClaimKind, ClaimResult, ClaimStatus, SpotError,
    SpotReport, SpotStatus,
};

pub const DEFAULT_PRECISION: u32 = 30;

/// `2^-6`
pub fn default_epsilon() -> Q {
    Q::new(BigInt::one(), BigInt::from(64))
}

/// `2^-m` for `m = 3..=16`.
pub fn default_radii() -> Vec<Q> {
    dyadic_radii(3, 16)
}

/// `2^-m` for `m = from..=to`.
pub fn dyadic_radii(from: u32, to: u32) -> Vec<Q> {
    (from..=to).map(|m| Q::new(BigInt::one(), BigInt::one() << m as usize)).collect()
}

/// `±3^-m` for `m = 2..=12`, largest first.
pub fn default_steps() -> Vec<Q> {
    let mut v = Vec::new();
    for m in 2..=12 {
        let h = Q::new(BigInt::one(), pow3(m));
        v.push(h.clone());
        v.push(-h);
    }
    v
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("radii must be positive and strictly decreasing")]
    BadRadii,
    #[error("a plan needs at least one ladder kind")]
    NoLadder,
    #[error("the {ladder} ladder cannot approach a {family} center")]
    IncompatibleLadder { ladder: &'static str, family: &'static str },
    #[error("epsilon must be positive")]
    BadEpsilon,
    #[error("steps must be nonzero, decreasing in magnitude, and include both signs")]
    BadSteps,
    #[error("precision must be at least 1")]
    BadPrecision,
}

/// Where and how hard to probe one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbePlan {
    pub center: TaggedPoint,
    #[serde(with = "ratio_vec_serde")]
    pub radii: Vec<Q>,
    pub ladders: Vec<LadderKind>,
    #[serde(with = "ratio_serde")]
    pub epsilon: Q,
    pub precision: u32,
    /// Difference-quotient steps.
    #[serde(with = "ratio_vec_serde", default = "default_steps")]
    pub steps: Vec<Q>,
}

impl ProbePlan {
    /// Default schedules with every ladder that supports the center.
    pub fn new(center: TaggedPoint) -> ProbePlan {
        let ladders = LadderKind::ALL.into_iter().filter(|k| k.supports(&center)).collect();
        ProbePlan {
            center,
            radii: default_radii(),
            ladders,
            epsilon: default_epsilon(),
            precision: DEFAULT_PRECISION,
            steps: default_steps(),
        }
    }

    pub fn with_ladders(mut self, ladders: &[LadderKind]) -> ProbePlan {
        self.ladders = ladders.to_vec();
        self
    }

    pub fn with_radii(mut self, radii: Vec<Q>) -> ProbePlan {
        self.radii = radii;
        self
    }

    pub fn with_epsilon(mut self, eps: Q) -> ProbePlan {
        self.epsilon = eps;
        self
    }

    pub fn with_steps(mut self, steps: Vec<Q>) -> ProbePlan {
        self.steps = steps;
        self
    }

    pub fn with_precision(mut self, precision: u32) -> ProbePlan {
        self.precision = precision;
        self
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        if self.radii.is_empty()
            || self.radii.iter().any(|r| !r.is_positive())
            || self.radii.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(PlanError::BadRadii);
        }
        if self.ladders.is_empty() {
            return Err(PlanError::NoLadder);
        }
        if let Some(k) = self.ladders.iter().find(|k| !k.supports(&self.center)) {
            return Err(PlanError::IncompatibleLadder { ladder: k.name(), family: self.center.family() });
        }
        if !self.epsilon.is_positive() {
            return Err(PlanError::BadEpsilon);
        }
        if self.precision == 0 {
            return Err(PlanError::BadPrecision);
        }
        validate_steps(&self.steps)
    }
}

pub(crate) fn validate_steps(steps: &[Q]) -> Result<(), PlanError> {
    let ok = !steps.is_empty()
        && steps.iter().all(|h| !h.is_zero())
        && steps.iter().any(|h| h.is_positive())
        && steps.iter().any(|h| h.is_negative())
        && steps.windows(2).all(|w| w[1].abs() <= w[0].abs());
    if ok {
        Ok(())
    } else {
        Err(PlanError::BadSteps)
    }
}

/// Outcome of a probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// No violation at the finest radius; `budget_used` counts evaluations.
    Consistent {
        budget_used: usize,
    },
    /// `|f(witness) - f(reference)|` lies in `gap`, whose lower end is at least epsilon.
    Falsified {
        witness: TaggedPoint,
        reference: TaggedPoint,
        gap: Enclosure,
    },
    ConvergesTo {
        limit: Enclosure,
    },
    Oscillates {
        low: Enclosure,
        high: Enclosure,
    },
    Inconclusive {
        reason: String,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Consistent { .. } => "consistent",
            Verdict::Falsified { .. } => "falsified",
            Verdict::ConvergesTo { .. } => "converges_to",
            Verdict::Oscillates { .. } => "oscillates",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self, Verdict::Falsified { .. })
    }
}
