//! Exact real points with decidable rationality.
//!
//! A [`TaggedPoint`] is one of a handful of closed families of reals: reduced
//! rationals, quadratic surds `a + b√2`, affine images of powers of π (and of
//! their reciprocals), `sin(m) + 2n`, and Cantor-set points driven by an
//! aperiodic digit generator. Every family can be enclosed to any requested
//! width, and rationality is read off the tag.

mod digits;
mod syntax;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::enclosure::Enclosure;
use crate::numeric;
use crate::Q;

pub use digits::{
    canonical_expansion, ternary_digit, ternary_prefix, CantorGenerator, DigitError, DigitStream, StreamState,
    TernaryExpansion,
};
pub use syntax::ParsePointError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PointError {
    #[error("coefficient of the irrational part must be nonzero")]
    ZeroCoefficient,
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("sin(m) needs a positive integer m")]
    BadSinArgument,
}

/// `a + b√2` with `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Q,
    b: Q,
}

impl Surd {
    pub fn a(&self) -> &Q {
        &self.a
    }
    pub fn b(&self) -> &Q {
        &self.b
    }
}

/// `a + b·π^k` (or `a + b·π^-k` when `inverse`) with `b != 0`, `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiAffine {
    a: Q,
    b: Q,
    k: u32,
}

impl PiAffine {
    pub fn a(&self) -> &Q {
        &self.a
    }
    pub fn b(&self) -> &Q {
        &self.b
    }
    pub fn k(&self) -> u32 {
        self.k
    }
}

/// `sin(m) + 2n` with `m >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SinShift {
    m: u64,
    n: i64,
}

impl SinShift {
    pub fn m(&self) -> u64 {
        self.m
    }
    pub fn n(&self) -> i64 {
        self.n
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TaggedPoint {
    Rat(Q),
    Surd(Surd),
    PiAffine(PiAffine),
    PiAffineInv(PiAffine),
    SinShift(SinShift),
    CantorOracle(CantorGenerator),
}

impl TaggedPoint {
    pub fn rational(value: Q) -> Self {
        TaggedPoint::Rat(value)
    }

    /// `num/den`; panics on a zero denominator like `Ratio::new`.
    pub fn ratio(num: i64, den: i64) -> Self {
        TaggedPoint::Rat(Q::new(num.into(), den.into()))
    }

    pub fn surd(a: Q, b: Q) -> Result<Self, PointError> {
        if b.is_zero() {
            return Err(PointError::ZeroCoefficient);
        }
        Ok(TaggedPoint::Surd(Surd { a, b }))
    }

    pub fn pi_affine(a: Q, b: Q, k: u32) -> Result<Self, PointError> {
        Self::check_pi(&b, k)?;
        Ok(TaggedPoint::PiAffine(PiAffine { a, b, k }))
    }

    pub fn pi_affine_inv(a: Q, b: Q, k: u32) -> Result<Self, PointError> {
        Self::check_pi(&b, k)?;
        Ok(TaggedPoint::PiAffineInv(PiAffine { a, b, k }))
    }

    fn check_pi(b: &Q, k: u32) -> Result<(), PointError> {
        if b.is_zero() {
            return Err(PointError::ZeroCoefficient);
        }
        if k == 0 {
            return Err(PointError::ZeroExponent);
        }
        Ok(())
    }

    /// The point `π^k`.
    pub fn pi_power(k: u32) -> Self {
        TaggedPoint::PiAffine(PiAffine { a: Q::zero(), b: Q::one(), k: k.max(1) })
    }

    /// The point `π^-k`.
    pub fn pi_power_inv(k: u32) -> Self {
        TaggedPoint::PiAffineInv(PiAffine { a: Q::zero(), b: Q::one(), k: k.max(1) })
    }

    pub fn sin_shift(m: u64, n: i64) -> Result<Self, PointError> {
        if m == 0 {
            return Err(PointError::BadSinArgument);
        }
        Ok(TaggedPoint::SinShift(SinShift { m, n }))
    }

    pub fn cantor(generator: CantorGenerator) -> Self {
        TaggedPoint::CantorOracle(generator)
    }

    /// The reduced fraction when the point is rational.
    pub fn is_rational(&self) -> Option<&Q> {
        match self {
            TaggedPoint::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// True exactly for the point `π^k`.
    pub fn is_pi_power(&self, k: u32) -> bool {
        matches!(self, TaggedPoint::PiAffine(p) if p.k == k && p.a.is_zero() && p.b.is_one())
    }

    /// The exponent `k` when the point is `π^k`.
    pub fn pi_power_exponent(&self) -> Option<u32> {
        match self {
            TaggedPoint::PiAffine(p) if p.a.is_zero() && p.b.is_one() => Some(p.k),
            _ => None,
        }
    }

    /// The exponent `k` when the point is `π^-k`.
    pub fn pi_power_inv_exponent(&self) -> Option<u32> {
        match self {
            TaggedPoint::PiAffineInv(p) if p.a.is_zero() && p.b.is_one() => Some(p.k),
            _ => None,
        }
    }

    /// Membership in `{sin(m) + 2n}`, decided by tag.
    pub fn is_sin_lattice(&self) -> bool {
        matches!(self, TaggedPoint::SinShift(_))
    }

    /// Encloses the value in an interval of width at most `2^-precision`.
    pub fn enclose(&self, precision: u32) -> Enclosure {
        match self {
            TaggedPoint::Rat(r) => Enclosure::exact(r.clone()),
            TaggedPoint::Surd(s) => {
                let extra = numeric::log2_ceil(&s.b) + 2;
                let root = numeric::sqrt_int(2, precision + extra);
                root.scale(&s.b).add_rational(&s.a).round_out(precision + 2)
            }
            TaggedPoint::PiAffine(p) => {
                let extra = numeric::log2_ceil(&p.b) + 2;
                numeric::pi_pow(p.k, precision + extra).scale(&p.b).add_rational(&p.a).round_out(precision + 2)
            }
            TaggedPoint::PiAffineInv(p) => {
                let extra = numeric::log2_ceil(&p.b) + 2;
                numeric::pi_pow_inv(p.k, precision + extra).scale(&p.b).add_rational(&p.a).round_out(precision + 2)
            }
            TaggedPoint::SinShift(s) => {
                let m = i64::try_from(s.m).unwrap_or(i64::MAX);
                numeric::sin_integer(m, precision + 1)
                    .add_rational(&Q::from_integer(BigInt::from(2 * s.n as i128)))
                    .round_out(precision + 2)
            }
            TaggedPoint::CantorOracle(g) => g.enclose(precision),
        }
    }

    /// Exact comparison against a rational.
    pub fn compare(&self, q: &Q) -> Ordering {
        if let TaggedPoint::Rat(r) = self {
            return r.cmp(q);
        }
        // irrational: refinement terminates because the value differs from q
        let mut bits = 32;
        loop {
            if let Some(ord) = self.enclose(bits).compare(q) {
                return ord;
            }
            bits *= 2;
        }
    }

    /// True when `lo <= p <= hi`.
    pub fn in_closed(&self, lo: &Q, hi: &Q) -> bool {
        self.compare(lo) != Ordering::Less && self.compare(hi) != Ordering::Greater
    }

    /// `p + h`, when the sum stays inside a supported family.
    pub fn shift(&self, h: &Q) -> Option<TaggedPoint> {
        match self {
            TaggedPoint::Rat(r) => Some(TaggedPoint::Rat(r + h)),
            TaggedPoint::Surd(s) => Some(TaggedPoint::Surd(Surd { a: &s.a + h, b: s.b.clone() })),
            TaggedPoint::PiAffine(p) => Some(TaggedPoint::PiAffine(PiAffine { a: &p.a + h, b: p.b.clone(), k: p.k })),
            TaggedPoint::PiAffineInv(p) => {
                Some(TaggedPoint::PiAffineInv(PiAffine { a: &p.a + h, b: p.b.clone(), k: p.k }))
            }
            TaggedPoint::SinShift(s) => {
                // only even integer shifts stay in the family
                if h.is_integer() && (h.to_integer() % BigInt::from(2)).is_zero() {
                    let d: i64 = (h.to_integer() / BigInt::from(2)).try_into().ok()?;
                    Some(TaggedPoint::SinShift(SinShift { m: s.m, n: s.n.checked_add(d)? }))
                } else {
                    None
                }
            }
            TaggedPoint::CantorOracle(_) => {
                if h.is_zero() {
                    Some(self.clone())
                } else {
                    None
                }
            }
        }
    }

    /// Adds `delta` to the irrational coefficient, keeping the family.
    /// Returns `None` for families without such a coefficient or when the
    /// coefficient would vanish.
    pub fn nudge_coefficient(&self, delta: &Q) -> Option<TaggedPoint> {
        let nb = |b: &Q| -> Option<Q> {
            let v = b + delta;
            (!v.is_zero()).then_some(v)
        };
        match self {
            TaggedPoint::Surd(s) => Some(TaggedPoint::Surd(Surd { a: s.a.clone(), b: nb(&s.b)? })),
            TaggedPoint::PiAffine(p) => Some(TaggedPoint::PiAffine(PiAffine { a: p.a.clone(), b: nb(&p.b)?, k: p.k })),
            TaggedPoint::PiAffineInv(p) => {
                Some(TaggedPoint::PiAffineInv(PiAffine { a: p.a.clone(), b: nb(&p.b)?, k: p.k }))
            }
            _ => None,
        }
    }

    /// Short family name, used in reports.
    pub fn family(&self) -> &'static str {
        match self {
            TaggedPoint::Rat(_) => "rational",
            TaggedPoint::Surd(_) => "surd",
            TaggedPoint::PiAffine(_) => "pi-affine",
            TaggedPoint::PiAffineInv(_) => "pi-affine-inv",
            TaggedPoint::SinShift(_) => "sin-shift",
            TaggedPoint::CantorOracle(_) => "cantor",
        }
    }
}

impl From<Q> for TaggedPoint {
    fn from(value: Q) -> Self {
        TaggedPoint::Rat(value)
    }
}

impl fmt::Display for TaggedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&syntax::print(self))
    }
}

impl std::str::FromStr for TaggedPoint {
    type Err = ParsePointError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        syntax::parse(s)
    }
}

impl Serialize for TaggedPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TaggedPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn pow3(n: u32) -> BigInt {
    BigInt::from(3).pow(n)
}
