//! Continuity probes, discontinuity witnesses and difference-quotient scans.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use super::ladder::{ladder_points, LadderKind};
use super::{default_radii, validate_steps, ProbePlan, Verdict, DEFAULT_PRECISION};
use crate::enclosure::{ratio_serde, Enclosure};
use crate::numeric::log2_ceil;
use crate::points::TaggedPoint;
use crate::zoo::{eval, FnExpr};
use crate::Q;

/// Refinement rounds for a gap that straddles epsilon.
const GAP_REFINEMENTS: u32 = 2;

enum PairStatus {
    Violates(Enclosure),
    Clean,
    Unresolved,
}

fn gap_of(a: &Enclosure, b: &Enclosure) -> Enclosure {
    if let (Some(x), Some(y)) = (a.exact_value(), b.exact_value()) {
        return Enclosure::exact((x - y).abs());
    }
    Enclosure::new(a.separation(b), a.max_distance(b))
}

/// Center values at `precision · 2^i`, computed on first use.
struct CenterValues<'a> {
    expr: &'a FnExpr,
    center: &'a TaggedPoint,
    precision: u32,
    cells: [OnceLock<Option<Enclosure>>; GAP_REFINEMENTS as usize + 1],
}

impl<'a> CenterValues<'a> {
    fn new(expr: &'a FnExpr, center: &'a TaggedPoint, precision: u32) -> Self {
        CenterValues { expr, center, precision, cells: Default::default() }
    }

    fn at(&self, round: u32) -> Option<&Enclosure> {
        self.cells[round as usize].get_or_init(|| eval(self.expr, self.center, self.precision << round).ok()).as_ref()
    }
}

fn classify_pair(values: &CenterValues, x: &TaggedPoint, eps: &Q) -> PairStatus {
    for round in 0..=GAP_REFINEMENTS {
        let (Some(fc), Ok(fx)) = (values.at(round), eval(values.expr, x, values.precision << round)) else {
            return PairStatus::Unresolved;
        };
        let gap = gap_of(&fx, fc);
        if gap.lo() >= eps {
            return PairStatus::Violates(gap);
        }
        if gap.hi() < eps {
            return PairStatus::Clean;
        }
    }
    PairStatus::Unresolved
}

/// Probes continuity of `expr` at `plan.center`.
///
/// Returns `Falsified` when every radius of the plan has a ladder point whose
/// value is certified to differ from the center value by at least epsilon
/// (the reported witness comes from the finest radius), `Consistent` when
/// every ladder point at the finest radius is certified within epsilon, and
/// `Inconclusive` otherwise.
pub fn continuity_probe(expr: &FnExpr, plan: &ProbePlan) -> Verdict {
    if let Err(e) = plan.validate() {
        return Verdict::Inconclusive { reason: format!("invalid plan: {e}") };
    }
    let center = &plan.center;
    let values = CenterValues::new(expr, center, plan.precision);
    let mut evaluations = 1;
    let mut scan = |r: &Q| {
        let pts: Vec<TaggedPoint> = plan.ladders.iter().flat_map(|&k| ladder_points(k, center, r)).collect();
        evaluations += pts.len();
        let results: Vec<PairStatus> = pts.par_iter().map(|x| classify_pair(&values, x, &plan.epsilon)).collect();
        (pts, results)
    };
    // The finest radius decides unless it holds a violator.
    let finest = plan.radii.last().expect("validated");
    let (pts, results) = scan(finest);
    let violator = pts.iter().zip(&results).find_map(|(x, s)| match s {
        PairStatus::Violates(g) => Some((x.clone(), g.clone())),
        _ => None,
    });
    let Some((witness, gap)) = violator else {
        if !pts.is_empty() && results.iter().all(|s| matches!(s, PairStatus::Clean)) {
            return Verdict::Consistent { budget_used: evaluations };
        }
        let unresolved = results.iter().filter(|s| matches!(s, PairStatus::Unresolved)).count();
        let reason = if unresolved > 0 {
            format!("{unresolved} gap(s) at the finest radius straddle epsilon")
        } else {
            "no ladder points at the finest radius".to_string()
        };
        return Verdict::Inconclusive { reason };
    };
    for r in plan.radii.iter().rev().skip(1) {
        let (_, results) = scan(r);
        if !results.iter().any(|s| matches!(s, PairStatus::Violates(_))) {
            return Verdict::Inconclusive { reason: "epsilon violated at some radii but not all".into() };
        }
    }
    Verdict::Falsified { witness, reference: center.clone(), gap }
}

/// Radius schedule and precision for [`discontinuity_witness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessBudget {
    pub radii: Vec<Q>,
    pub precision: u32,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        WitnessBudget { radii: default_radii(), precision: DEFAULT_PRECISION }
    }
}

/// Searches for two approach sequences to `center` whose values stay at
/// least `gap` apart at every radius.
///
/// The constant sequence at the center and one sequence per compatible
/// ladder are paired in order; the first pair separated at every radius
/// yields `Falsified` with the finest-radius pair.
pub fn discontinuity_witness(expr: &FnExpr, center: &TaggedPoint, gap: &Q, budget: &WitnessBudget) -> Verdict {
    if budget.radii.is_empty() || !gap.is_positive() {
        return Verdict::Inconclusive { reason: "empty radius schedule or non-positive gap".into() };
    }
    let Ok(fc) = eval(expr, center, budget.precision) else {
        return Verdict::Inconclusive { reason: format!("cannot evaluate at {center}") };
    };
    let ladders: Vec<LadderKind> = LadderKind::ALL.into_iter().filter(|k| k.supports(center)).collect();
    // seqs[s][radius] = evaluated points
    let mut seqs: Vec<Vec<Vec<(TaggedPoint, Enclosure)>>> = vec![vec![vec![(center.clone(), fc)]; budget.radii.len()]];
    for &k in &ladders {
        let per_radius = budget
            .radii
            .iter()
            .map(|r| {
                ladder_points(k, center, r)
                    .into_par_iter()
                    .filter_map(|x| eval(expr, &x, budget.precision).ok().map(|v| (x, v)))
                    .collect()
            })
            .collect();
        seqs.push(per_radius);
    }
    for i in 0..seqs.len() {
        for j in i + 1..seqs.len() {
            let mut finest = None;
            let separated = (0..budget.radii.len()).all(|ri| {
                let hit = seqs[i][ri].iter().find_map(|(x, fx)| {
                    seqs[j][ri]
                        .iter()
                        .find_map(|(y, fy)| (&fx.separation(fy) >= gap).then(|| (x.clone(), y.clone(), gap_of(fx, fy))))
                });
                let ok = hit.is_some();
                finest = hit;
                ok
            });
            if separated {
                let (reference, witness, g) = finest.expect("checked");
                return Verdict::Falsified { witness, reference, gap: g };
            }
        }
    }
    Verdict::Inconclusive { reason: "no pair of approach sequences stays separated by the gap".into() }
}

/// Difference quotients at a center and their trend.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientScan {
    pub quotients: Vec<StepQuotient>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepQuotient {
    #[serde(with = "ratio_serde")]
    pub step: Q,
    pub quotient: Enclosure,
}

fn bits_for_step(precision: u32, h: &Q) -> u32 {
    precision + log2_ceil(&(Q::one() / h.abs())) + 2
}

/// Encloses `(f(c+h) - f(c))/h` for each step and classifies the trend.
///
/// `Oscillates` when the late positive-step and negative-step quotients
/// have disjoint hulls; `ConvergesTo` when the late hull is no wider than
/// the early one (or negligibly narrow), widened by its own width; otherwise
/// `Inconclusive`.
pub fn diff_quotients(expr: &FnExpr, center: &TaggedPoint, steps: &[Q], precision: u32) -> QuotientScan {
    let inconclusive =
        |reason: String| QuotientScan { quotients: Vec::new(), verdict: Verdict::Inconclusive { reason } };
    if validate_steps(steps).is_err() {
        return inconclusive("steps must be nonzero, decreasing in magnitude, and include both signs".into());
    }
    let mut shifted = Vec::with_capacity(steps.len());
    for h in steps {
        match center.shift(h) {
            Some(x) => shifted.push(x),
            None => return inconclusive(format!("{} points cannot be shifted by {h}", center.family())),
        }
    }
    let finest = steps.iter().map(|h| bits_for_step(precision, h)).max().unwrap_or(precision);
    let Ok(fc) = eval(expr, center, finest) else {
        return inconclusive(format!("cannot evaluate at {center}"));
    };
    let results: Vec<Result<Enclosure, String>> = steps
        .par_iter()
        .zip(shifted.par_iter())
        .map(|(h, x)| {
            let fx = eval(expr, x, bits_for_step(precision, h)).map_err(|e| e.to_string())?;
            Ok(fx.sub(&fc).scale(&(Q::one() / h)))
        })
        .collect();
    let mut quotients = Vec::with_capacity(steps.len());
    for (h, r) in steps.iter().zip(results) {
        match r {
            Ok(q) => quotients.push(StepQuotient { step: h.clone(), quotient: q }),
            Err(e) => return inconclusive(e),
        }
    }
    let verdict = classify(&quotients, precision);
    QuotientScan { quotients, verdict }
}

fn hull_of<'a>(it: impl IntoIterator<Item = &'a Enclosure>) -> Option<Enclosure> {
    it.into_iter().fold(None, |acc: Option<Enclosure>, e| Some(acc.map_or_else(|| e.clone(), |a| a.hull(e))))
}

fn classify(quotients: &[StepQuotient], precision: u32) -> Verdict {
    let side = |positive: bool| -> Vec<&Enclosure> {
        quotients.iter().filter(|s| s.step.is_positive() == positive).map(|s| &s.quotient).collect()
    };
    let (pos, neg) = (side(true), side(false));
    let split = |v: &[&Enclosure]| -> (Option<Enclosure>, Option<Enclosure>) {
        let mid = v.len() / 2;
        let late = hull_of(v[mid..].iter().copied());
        let early = if mid == 0 { late.clone() } else { hull_of(v[..mid].iter().copied()) };
        (early, late)
    };
    let (ep, lp) = split(&pos);
    let (en, ln) = split(&neg);
    let (Some(lp), Some(ln), Some(ep), Some(en)) = (lp, ln, ep, en) else {
        return Verdict::Inconclusive { reason: "need steps of both signs".into() };
    };
    if lp.separation(&ln).is_positive() {
        let (low, high) = if lp.hi() < ln.lo() { (lp, ln) } else { (ln, lp) };
        return Verdict::Oscillates { low, high };
    }
    let late = lp.hull(&ln);
    let early = ep.hull(&en);
    let w = late.width();
    let tiny = Q::new(BigInt::one(), BigInt::one() << (precision / 2) as usize);
    if w.is_zero() {
        return Verdict::ConvergesTo { limit: late };
    }
    if w <= tiny || w <= early.width() {
        let limit = Enclosure::new(late.lo() - &w, late.hi() + &w);
        return Verdict::ConvergesTo { limit };
    }
    Verdict::Inconclusive { reason: "difference quotients do not settle".into() }
}
