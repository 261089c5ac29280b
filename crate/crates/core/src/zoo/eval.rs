//! Certified evaluation of expression trees.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::special::{self, BumpKind};
use super::{CombTerms, EvalError, FnExpr};
use crate::enclosure::Enclosure;
use crate::numeric::{cos_pi, log2_ceil, sin_pi};
use crate::points::{pow3, TaggedPoint};
use crate::Q;

/// Refinement limits for [`eval_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Refinement rounds allowed per ternary digit of an irrational point.
    pub digit_budget: u32,
    /// Outer precision-doubling rounds before giving up.
    pub max_rounds: u32,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { digit_budget: 12, max_rounds: 6 }
    }
}

/// Encloses `expr(p)` in an interval of width at most `2^-precision`.
pub fn eval(expr: &FnExpr, p: &TaggedPoint, precision: u32) -> Result<Enclosure, EvalError> {
    eval_with(expr, p, precision, &EvalOptions::default())
}

pub fn eval_with(expr: &FnExpr, p: &TaggedPoint, precision: u32, opts: &EvalOptions) -> Result<Enclosure, EvalError> {
    let mut guard = 4;
    for _ in 0..opts.max_rounds.max(1) {
        let e = eval_at(expr, p, precision + guard, opts)?;
        if e.is_exact() {
            return Ok(e);
        }
        if e.meets_width(precision + 1) {
            return Ok(e.round_out(precision + 2));
        }
        guard = guard * 2 + 8;
    }
    Err(EvalError::BudgetExhausted(format!("width 2^-{precision} not reached at {p} after {} rounds", opts.max_rounds)))
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn bits_of(n: usize) -> u32 {
    usize::BITS - n.saturating_sub(1).leading_zeros()
}

/// Leaves that resolve without numerical work at most points.
fn is_cheap(e: &FnExpr) -> bool {
    matches!(
        e,
        FnExpr::Dirichlet
            | FnExpr::Thomae
            | FnExpr::FC
            | FnExpr::GC
            | FnExpr::PiComb(_)
            | FnExpr::ShiftCombAtInversePiPowers(_)
            | FnExpr::SinLattice
            | FnExpr::ConstOne
    )
}

/// Applies a function of the point's value, refining the point until the
/// result is narrow enough.
fn of_x(p: &TaggedPoint, w: u32, f: impl Fn(&Enclosure, u32) -> Enclosure) -> Enclosure {
    if let Some(x) = p.is_rational() {
        return f(&Enclosure::exact(x.clone()), w + 2);
    }
    let mut guard = 8;
    let mut last = None;
    for _ in 0..6 {
        let v = f(&p.enclose(w + guard), w + 2);
        if v.meets_width(w) {
            return v;
        }
        last = Some(v);
        guard = guard * 2 + 8;
    }
    last.expect("at least one round")
}

fn poly(x: &Enclosure, n: u32, squared: bool) -> Enclosure {
    let mut acc = Enclosure::one();
    for k in 1..=n {
        let f = x.add_rational(&-Q::from_integer(k.into()));
        acc = acc.mul(&if squared { f.square() } else { f });
    }
    acc
}

fn poly_at_thirds(x: &Enclosure, n: u32) -> Enclosure {
    let mut acc = Enclosure::one();
    for k in 1..=n {
        acc = acc.mul(&x.add_rational(&-Q::new(BigInt::one(), pow3(k))).square());
    }
    acc
}

/// `sin²(πy) = (1 - cos(2πy))/2`, exact where the cosine is rational.
fn sin_sq(y: &Enclosure, bits: u32) -> Enclosure {
    cos_pi(&y.scale(&q(2, 1)), bits + 1).neg().add_rational(&Q::one()).scale(&q(1, 2)).clamp(&Q::zero(), &Q::one())
}

fn eval_at(expr: &FnExpr, p: &TaggedPoint, w: u32, opts: &EvalOptions) -> Result<Enclosure, EvalError> {
    let indicator = |b: bool| if b { Enclosure::one() } else { Enclosure::zero() };
    Ok(match expr {
        FnExpr::Dirichlet => indicator(p.is_rational().is_some()),
        FnExpr::Thomae => match p.is_rational() {
            Some(r) => Enclosure::exact(Q::new(BigInt::one(), r.denom().clone())),
            None => Enclosure::zero(),
        },
        FnExpr::ConstOne => Enclosure::one(),
        FnExpr::Identity => p.enclose(w),
        FnExpr::CantorFn => special::cantor_fn(p, w, opts.digit_budget)?,
        FnExpr::Weierstrass => special::weierstrass(p, w),
        FnExpr::FC => special::bump_sum(BumpKind::T1, p, w),
        FnExpr::GC => special::bump_sum(BumpKind::T2, p, w),
        FnExpr::SinPiX => of_x(p, w, sin_pi),
        FnExpr::AbsSinPiX => of_x(p, w, |x, b| sin_pi(x, b).abs()),
        FnExpr::SinSqPiX => of_x(p, w, sin_sq),
        FnExpr::SinSqPiOverX => {
            if p.is_rational().is_some_and(|r| r.is_zero()) {
                Enclosure::zero()
            } else {
                of_x(p, w, |x, b| match x.recip() {
                    Some(y) => sin_sq(&y, b),
                    None => Enclosure::new(Q::zero(), Q::one()),
                })
            }
        }
        FnExpr::PiComb(terms) => {
            let on = match (p.pi_power_exponent(), terms) {
                (Some(_), CombTerms::Infinite) => true,
                (Some(k), CombTerms::Finite(n)) => k <= *n,
                (None, _) => false,
            };
            if on {
                p.enclose(w)
            } else {
                Enclosure::zero()
            }
        }
        FnExpr::ShiftCombAtInversePiPowers(n) => match p.pi_power_inv_exponent() {
            Some(k) if k <= *n => p.enclose(w),
            _ => Enclosure::zero(),
        },
        FnExpr::SinLattice => indicator(p.is_sin_lattice()),
        FnExpr::PolyFactor { n, squared } => of_x(p, w, |x, _| poly(x, *n, *squared)),
        FnExpr::PolyFactorAtThirds(n) => of_x(p, w, |x, _| poly_at_thirds(x, *n)),
        FnExpr::AbsPolyFactor(n) => of_x(p, w, |x, _| poly(x, *n, false).abs()),
        FnExpr::Sum(terms) => {
            let bits = w + bits_of(terms.len()) + 1;
            let mut acc = Enclosure::zero();
            for t in terms {
                acc = acc.add(&eval_at(t, p, bits, opts)?);
            }
            acc
        }
        FnExpr::Scale(r, inner) => {
            if r.is_zero() {
                Enclosure::zero()
            } else {
                eval_at(inner, p, w + log2_ceil(r) + 1, opts)?.scale(r)
            }
        }
        FnExpr::RestrictToUnit(inner) => {
            if p.in_closed(&Q::zero(), &Q::one()) {
                eval_at(inner, p, w, opts)?
            } else {
                Enclosure::zero()
            }
        }
        FnExpr::Product(factors) => product(factors, p, w, opts)?,
    })
}

fn product(factors: &[FnExpr], p: &TaggedPoint, w: u32, opts: &EvalOptions) -> Result<Enclosure, EvalError> {
    let mut order: Vec<usize> = (0..factors.len()).collect();
    order.sort_by_key(|&i| !is_cheap(&factors[i]));
    let mut vals: Vec<Option<Enclosure>> = vec![None; factors.len()];
    let mut failure = None;
    for &i in &order {
        match eval_at(&factors[i], p, w + 4, opts) {
            Ok(v) if v.is_exact_zero() => return Ok(Enclosure::zero()),
            Ok(v) => vals[i] = Some(v),
            Err(e) => failure = Some(e),
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let vals: Vec<Enclosure> = vals.into_iter().map(|v| v.expect("evaluated")).collect();
    let prod = vals.iter().fold(Enclosure::one(), |acc, v| acc.mul(v));
    if prod.is_exact() || prod.meets_width(w) {
        return Ok(prod);
    }
    // width(Π v_i) ≲ Σ_i width(v_i) Π_{j≠i} (|v_j| + 1)
    let mags: Vec<Q> = vals.iter().map(|v| v.magnitude() + Q::one()).collect();
    let mut total = Q::zero();
    for i in 0..mags.len() {
        let mut t = Q::one();
        for (j, m) in mags.iter().enumerate() {
            if j != i {
                t *= m;
            }
        }
        total += t;
    }
    let bits = w + log2_ceil(&total) + 2 + bits_of(factors.len());
    let mut acc = Enclosure::one();
    for (f, v) in factors.iter().zip(&vals) {
        let v = if v.is_exact() { v.clone() } else { eval_at(f, p, bits, opts)? };
        acc = acc.mul(&v);
    }
    Ok(acc)
}
