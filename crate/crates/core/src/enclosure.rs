//! Closed rational intervals certified to contain an exact real value.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::Q;

/// A closed interval `[lo, hi]` with rational endpoints.
///
/// `exact` marks enclosures where `lo == hi` was reached through exact
/// arithmetic; such a value is the represented number itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Q,
    hi: Q,
    exact: bool,
}

impl Enclosure {
    pub fn exact(value: Q) -> Self {
        Enclosure { lo: value.clone(), hi: value, exact: true }
    }

    pub fn zero() -> Self {
        Self::exact(Q::zero())
    }

    pub fn one() -> Self {
        Self::exact(Q::one())
    }

    /// Builds an inexact enclosure. Endpoints are swapped if given out of order.
    pub fn new(lo: Q, hi: Q) -> Self {
        if lo <= hi {
            Enclosure { lo, hi, exact: false }
        } else {
            Enclosure { lo: hi, hi: lo, exact: false }
        }
    }

    /// `center ± radius`.
    pub fn ball(center: &Q, radius: &Q) -> Self {
        let r = radius.abs();
        Self::new(center - &r, center + &r)
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// The exact value, if this enclosure carries one.
    pub fn exact_value(&self) -> Option<&Q> {
        self.exact.then_some(&self.lo)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact && self.lo.is_zero()
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(BigInt::from(2))
    }

    /// True when `hi - lo <= 2^-bits`.
    pub fn meets_width(&self, bits: u32) -> bool {
        self.width() <= pow2_neg(bits)
    }

    pub fn contains(&self, value: &Q) -> bool {
        &self.lo <= value && value <= &self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        let lo = if self.lo <= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi >= other.hi { &self.hi } else { &other.hi };
        if self.exact && other.exact && self.lo == other.lo {
            return self.clone();
        }
        Enclosure::new(lo.clone(), hi.clone())
    }

    /// Largest absolute value attained on the interval.
    pub fn magnitude(&self) -> Q {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a >= b {
            a
        } else {
            b
        }
    }

    /// Certified lower bound on `|x - y|` for `x` in `self`, `y` in `other`.
    pub fn separation(&self, other: &Enclosure) -> Q {
        if self.hi < other.lo {
            &other.lo - &self.hi
        } else if other.hi < self.lo {
            &self.lo - &other.hi
        } else {
            Q::zero()
        }
    }

    /// Upper bound on `|x - y|` for `x` in `self`, `y` in `other`.
    pub fn max_distance(&self, other: &Enclosure) -> Q {
        let a = &self.hi - &other.lo;
        let b = &other.hi - &self.lo;
        if a >= b {
            a
        } else {
            b
        }
    }

    /// Orders the interval against a rational when that is decided.
    pub fn compare(&self, value: &Q) -> Option<Ordering> {
        if &self.hi < value {
            Some(Ordering::Less)
        } else if &self.lo > value {
            Some(Ordering::Greater)
        } else if self.exact {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Rounds the endpoints outward onto the grid `2^-bits`. Exact values
    /// are left untouched.
    pub fn round_out(self, bits: u32) -> Enclosure {
        if self.exact {
            return self;
        }
        let lo = floor_to_grid(&self.lo, bits);
        let hi = ceil_to_grid(&self.hi, bits);
        Enclosure { lo, hi, exact: false }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure { lo: -&self.hi, hi: -&self.lo, exact: self.exact }
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi, exact: self.exact && other.exact }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        self.add(&other.neg())
    }

    pub fn add_rational(&self, value: &Q) -> Enclosure {
        Enclosure { lo: &self.lo + value, hi: &self.hi + value, exact: self.exact }
    }

    pub fn scale(&self, factor: &Q) -> Enclosure {
        if factor.is_zero() {
            return Enclosure::zero();
        }
        let a = &self.lo * factor;
        let b = &self.hi * factor;
        let exact = self.exact;
        if a <= b {
            Enclosure { lo: a, hi: b, exact }
        } else {
            Enclosure { lo: b, hi: a, exact }
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Enclosure::zero();
        }
        if self.exact && other.exact {
            return Enclosure::exact(&self.lo * &other.lo);
        }
        let c = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        Enclosure { lo, hi, exact: false }
    }

    pub fn abs(&self) -> Enclosure {
        if self.lo >= Q::zero() {
            self.clone()
        } else if self.hi <= Q::zero() {
            self.neg()
        } else {
            Enclosure { lo: Q::zero(), hi: self.magnitude(), exact: false }
        }
    }

    pub fn square(&self) -> Enclosure {
        let a = self.abs();
        Enclosure { lo: &a.lo * &a.lo, hi: &a.hi * &a.hi, exact: a.exact }
    }

    /// Reciprocal; `None` when the interval touches zero.
    pub fn recip(&self) -> Option<Enclosure> {
        if self.lo <= Q::zero() && self.hi >= Q::zero() {
            return None;
        }
        Some(Enclosure { lo: self.hi.recip(), hi: self.lo.recip(), exact: self.exact })
    }

    pub fn pow(&self, k: u32) -> Enclosure {
        let mut acc = Enclosure::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Intersects with `[lo, hi]`; used to clip trigonometric results to `[-1, 1]`.
    pub fn clamp(self, lo: &Q, hi: &Q) -> Enclosure {
        if self.exact {
            return self;
        }
        let l = if &self.lo < lo { lo.clone() } else { self.lo };
        let h = if &self.hi > hi { hi.clone() } else { self.hi };
        Enclosure::new(l, h)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{}", fmt_ratio(&self.lo))
        } else {
            write!(f, "[{}, {}]", fmt_ratio(&self.lo), fmt_ratio(&self.hi))
        }
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Enclosure", 3)?;
        s.serialize_field("lo", &fmt_ratio(&self.lo))?;
        s.serialize_field("hi", &fmt_ratio(&self.hi))?;
        s.serialize_field("exact", &self.exact)?;
        s.end()
    }
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn fmt_ratio(r: &Q) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a plain integer, with an optional leading `-`.
pub fn parse_ratio(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() || den.is_negative() {
        return None;
    }
    Some(Q::new(num, den))
}

/// Serde adapter storing a rational as a `p/q` string.
pub(crate) mod ratio_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Q;

    pub fn serialize<S: Serializer>(r: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_ratio(&text).ok_or_else(|| serde::de::Error::custom(format!("invalid rational `{text}`")))
    }
}

/// Serde adapter for a list of `p/q` strings.
pub(crate) mod ratio_vec_serde {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Q;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&super::fmt_ratio(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| super::parse_ratio(t).ok_or_else(|| serde::de::Error::custom(format!("invalid rational `{t}`"))))
            .collect()
    }
}

pub(crate) fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

pub(crate) fn pow2_neg(bits: u32) -> Q {
    Q::new(BigInt::one(), pow2(bits))
}

pub(crate) fn floor_to_grid(r: &Q, bits: u32) -> Q {
    let scaled = r.numer() << bits as usize;
    Q::new(scaled.div_floor(r.denom()), pow2(bits))
}

pub(crate) fn ceil_to_grid(r: &Q, bits: u32) -> Q {
    let scaled = r.numer() << bits as usize;
    Q::new(scaled.div_ceil(r.denom()), pow2(bits))
}
