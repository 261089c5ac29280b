//! Spot checks of a representative against its declared block signature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::probe::{continuity_probe, diff_quotients, discontinuity_witness, WitnessBudget};
use super::{dyadic_radii, PlanError, ProbePlan, Verdict};
use crate::points::{CantorGenerator, TaggedPoint};
use crate::taxonomy::{BlockSignature, CardinalLabel};
use crate::zoo::{FnExpr, ZooEntry};
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    Continuous,
    Discontinuous,
    Differentiable,
    NonDifferentiable,
}

impl ClaimKind {
    pub const ALL: [ClaimKind; 4] =
        [ClaimKind::Continuous, ClaimKind::Discontinuous, ClaimKind::Differentiable, ClaimKind::NonDifferentiable];

    /// The signature component counting points of this kind.
    pub fn count_in(self, sig: &BlockSignature) -> CardinalLabel {
        match self {
            ClaimKind::Continuous => sig.continuity,
            ClaimKind::Discontinuous => sig.discontinuity,
            ClaimKind::Differentiable => sig.differentiability,
            ClaimKind::NonDifferentiable => sig.non_differentiability,
        }
    }
}

/// A claim that the function behaves a certain way at `plan.center`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub kind: ClaimKind,
    pub plan: ProbePlan,
}

impl Claim {
    pub fn new(kind: ClaimKind, plan: ProbePlan) -> Claim {
        Claim { kind, plan }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Confirmed,
    Contradicted,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub kind: ClaimKind,
    pub point: TaggedPoint,
    pub verdicts: Vec<Verdict>,
    pub status: ClaimStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpotStatus {
    /// Nothing contradicted and at least one claim confirmed.
    Pass,
    Contradiction,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpotReport {
    pub entry: usize,
    pub results: Vec<ClaimResult>,
    pub status: SpotStatus,
}

impl SpotReport {
    pub fn contradicted(&self) -> impl Iterator<Item = &ClaimResult> {
        self.results.iter().filter(|r| r.status == ClaimStatus::Contradicted)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpotError {
    #[error("the declared signature requires a {0:?} claim")]
    MissingClaim(ClaimKind),
    #[error("the declared signature has no {0:?} points")]
    UndeclaredClaim(ClaimKind),
    #[error("invalid plan at {point}: {error}")]
    InvalidPlan { point: String, error: PlanError },
}

fn check_claim(expr: &FnExpr, claim: &Claim) -> ClaimResult {
    let plan = &claim.plan;
    let cont = continuity_probe(expr, plan);
    let discontinuous = cont.is_falsified();
    let mut verdicts = vec![cont.clone()];
    let mut quotients = || {
        let v = diff_quotients(expr, &plan.center, &plan.steps, plan.precision).verdict;
        verdicts.push(v.clone());
        v
    };
    use ClaimStatus::*;
    let status = match claim.kind {
        ClaimKind::Continuous => match cont {
            Verdict::Falsified { .. } => Contradicted,
            Verdict::Consistent { .. } => Confirmed,
            _ => Inconclusive,
        },
        ClaimKind::Discontinuous => {
            if discontinuous {
                Confirmed
            } else {
                let budget = WitnessBudget { radii: plan.radii.clone(), precision: plan.precision };
                let w = discontinuity_witness(expr, &plan.center, &plan.epsilon, &budget);
                let hit = w.is_falsified();
                verdicts.push(w);
                if hit {
                    Confirmed
                } else {
                    Inconclusive
                }
            }
        }
        ClaimKind::Differentiable => {
            if discontinuous {
                Contradicted
            } else {
                match quotients() {
                    Verdict::ConvergesTo { .. } => Confirmed,
                    Verdict::Oscillates { .. } => Contradicted,
                    _ => Inconclusive,
                }
            }
        }
        ClaimKind::NonDifferentiable => {
            if discontinuous {
                Confirmed
            } else {
                match quotients() {
                    Verdict::Oscillates { .. } => Confirmed,
                    Verdict::ConvergesTo { .. } => Contradicted,
                    _ => Inconclusive,
                }
            }
        }
    };
    ClaimResult { kind: claim.kind, point: plan.center.clone(), verdicts, status }
}

/// Checks `expr` at planned points against `signature`.
///
/// Every kind with a nonzero count in the signature needs at least one
/// claim; claims of a kind the signature rules out are rejected.
pub fn spot_check_expr(
    entry: usize,
    expr: &FnExpr,
    signature: &BlockSignature,
    claims: &[Claim],
) -> Result<SpotReport, SpotError> {
    for kind in ClaimKind::ALL {
        let declared = kind.count_in(signature) != CardinalLabel::Zero;
        let present = claims.iter().any(|c| c.kind == kind);
        if declared && !present {
            return Err(SpotError::MissingClaim(kind));
        }
        if !declared && present {
            return Err(SpotError::UndeclaredClaim(kind));
        }
    }
    for c in claims {
        c.plan.validate().map_err(|error| SpotError::InvalidPlan { point: c.plan.center.to_string(), error })?;
    }
    let results: Vec<ClaimResult> = claims.par_iter().map(|c| check_claim(expr, c)).collect();
    let status = if results.iter().any(|r| r.status == ClaimStatus::Contradicted) {
        SpotStatus::Contradiction
    } else if results.iter().any(|r| r.status == ClaimStatus::Confirmed) {
        SpotStatus::Pass
    } else {
        SpotStatus::Inconclusive
    };
    Ok(SpotReport { entry, results, status })
}

/// Checks a representative against its declared signature.
pub fn signature_spot_check(entry: &ZooEntry, claims: &[Claim]) -> Result<SpotReport, SpotError> {
    spot_check_expr(entry.id, &entry.expr, &entry.declared_signature, claims)
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn surd(a: Q, b: Q) -> TaggedPoint {
    TaggedPoint::surd(a, b).expect("nonzero coefficient")
}

fn claims(kind: ClaimKind, points: &[TaggedPoint], tweak: impl Fn(ProbePlan) -> ProbePlan) -> Vec<Claim> {
    points.iter().map(|p| Claim::new(kind, tweak(ProbePlan::new(p.clone())))).collect()
}

/// Shipped claim sets for the named representatives (entries 1, 11, 22, 25, 28).
pub fn default_spot_plans(entry: usize) -> Option<Vec<Claim>> {
    use ClaimKind::*;
    let id = |p: ProbePlan| p;
    let root2 = surd(q(0, 1), q(1, 1));
    let v = match entry {
        1 => [
            claims(
                Discontinuous,
                &[
                    TaggedPoint::ratio(1, 2),
                    TaggedPoint::ratio(0, 1),
                    TaggedPoint::ratio(-3, 1),
                    root2.clone(),
                    TaggedPoint::pi_power(1),
                ],
                id,
            ),
            claims(NonDifferentiable, &[TaggedPoint::ratio(1, 3), surd(q(1, 1), q(1, 2))], id),
        ]
        .concat(),
        11 => [
            claims(Continuous, &[root2.clone(), TaggedPoint::pi_power(1)], id),
            claims(Discontinuous, &[TaggedPoint::ratio(1, 2), TaggedPoint::ratio(2, 3), TaggedPoint::ratio(0, 1)], id),
            claims(NonDifferentiable, &[TaggedPoint::ratio(1, 2), TaggedPoint::ratio(-7, 5)], id),
        ]
        .concat(),
        22 => {
            let deep = |p: ProbePlan| p.with_radii(dyadic_radii(3, 24));
            [
                claims(Continuous, &[TaggedPoint::ratio(0, 1), TaggedPoint::ratio(1, 3), root2.clone()], deep),
                claims(
                    NonDifferentiable,
                    &[TaggedPoint::ratio(0, 1), TaggedPoint::ratio(1, 1), TaggedPoint::ratio(1, 3)],
                    deep,
                ),
            ]
            .concat()
        }
        25 => [
            claims(
                Continuous,
                &[
                    TaggedPoint::ratio(1, 4),
                    TaggedPoint::ratio(1, 2),
                    surd(q(-1, 1), q(1, 1)),
                    TaggedPoint::cantor(CantorGenerator::ThueMorse),
                ],
                id,
            ),
            claims(
                Differentiable,
                &[
                    TaggedPoint::ratio(1, 2),
                    TaggedPoint::ratio(5, 9),
                    TaggedPoint::ratio(-1, 1),
                    TaggedPoint::ratio(2, 1),
                ],
                id,
            ),
            claims(
                NonDifferentiable,
                &[TaggedPoint::ratio(0, 1), TaggedPoint::ratio(1, 1), TaggedPoint::ratio(1, 3)],
                id,
            ),
        ]
        .concat(),
        28 => {
            let pts = [
                TaggedPoint::ratio(0, 1),
                TaggedPoint::ratio(1, 3),
                root2,
                TaggedPoint::pi_power(1),
                TaggedPoint::ratio(-5, 2),
            ];
            [claims(Continuous, &pts, id), claims(Differentiable, &pts, id)].concat()
        }
        _ => return None,
    };
    Some(v)
}
