//! Textual point syntax.
//!
//! ```text
//! 3/4   -2   sqrt2*<q>+<q>   pi^<k>*<q>+<q>   pi^-<k>*<q>+<q>
//! sin(<m>)+2*<n>   cantor:<generator>
//! ```
//!
//! Short forms (`sqrt2`, `pi`, `pi^3`, `sin(5)`, `sqrt2*1/2`) are accepted;
//! printing always produces the full form, which parses back to the same point.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{CantorGenerator, PointError, TaggedPoint};
use crate::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParsePointError {
    #[error("cannot parse point `{0}`")]
    Syntax(String),
    #[error("invalid point `{input}`: {reason}")]
    Invalid { input: String, reason: String },
}

struct Cursor<'a> {
    src: &'a str,
    rest: &'a str,
}

impl<'a> Cursor<'a> {
    fn eat(&mut self, tok: &str) -> bool {
        if let Some(r) = self.rest.strip_prefix(tok) {
            self.rest = r;
            true
        } else {
            false
        }
    }

    fn err(&self) -> ParsePointError {
        ParsePointError::Syntax(self.src.to_string())
    }

    fn unsigned_int(&mut self) -> Result<BigInt, ParsePointError> {
        let end = self.rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest.len());
        if end == 0 {
            return Err(self.err());
        }
        let (digits, rest) = self.rest.split_at(end);
        self.rest = rest;
        digits.parse().map_err(|_| self.err())
    }

    fn signed_int(&mut self) -> Result<BigInt, ParsePointError> {
        let neg = self.eat("-");
        let v = self.unsigned_int()?;
        Ok(if neg { -v } else { v })
    }

    fn rational(&mut self) -> Result<Q, ParsePointError> {
        let num = self.signed_int()?;
        let den = if self.eat("/") { self.unsigned_int()? } else { BigInt::one() };
        if den.is_zero() {
            return Err(self.err());
        }
        Ok(Q::new(num, den))
    }

    /// Optional `+<q>` / `-<q>` tail, defaulting to zero.
    fn offset(&mut self) -> Result<Q, ParsePointError> {
        if self.eat("+") {
            self.rational()
        } else if self.eat("-") {
            Ok(-self.rational()?)
        } else {
            Ok(Q::zero())
        }
    }

    fn finish(&self) -> Result<(), ParsePointError> {
        if self.rest.is_empty() {
            Ok(())
        } else {
            Err(self.err())
        }
    }
}

fn invalid(input: &str, e: PointError) -> ParsePointError {
    ParsePointError::Invalid { input: input.to_string(), reason: e.to_string() }
}

pub(super) fn parse(input: &str) -> Result<TaggedPoint, ParsePointError> {
    let s = input.trim();
    let mut c = Cursor { src: s, rest: s };
    if let Some(name) = s.strip_prefix("cantor:") {
        let g: CantorGenerator =
            name.parse().map_err(|reason| ParsePointError::Invalid { input: s.to_string(), reason })?;
        return Ok(TaggedPoint::CantorOracle(g));
    }
    if c.eat("sqrt2") {
        let b = if c.eat("*") { c.rational()? } else { Q::one() };
        let a = c.offset()?;
        c.finish()?;
        return TaggedPoint::surd(a, b).map_err(|e| invalid(s, e));
    }
    if c.eat("pi") {
        let (inverse, k) = if c.eat("^") {
            let inv = c.eat("-");
            let k = c.unsigned_int()?;
            (inv, u32::try_from(k).map_err(|_| c.err())?)
        } else {
            (false, 1)
        };
        let b = if c.eat("*") { c.rational()? } else { Q::one() };
        let a = c.offset()?;
        c.finish()?;
        let p = if inverse { TaggedPoint::pi_affine_inv(a, b, k) } else { TaggedPoint::pi_affine(a, b, k) };
        return p.map_err(|e| invalid(s, e));
    }
    if c.eat("sin(") {
        let m = c.unsigned_int()?;
        if !c.eat(")") {
            return Err(c.err());
        }
        let n = if c.eat("+2*") {
            c.signed_int()?
        } else if c.eat("-2*") {
            -c.unsigned_int()?
        } else {
            BigInt::zero()
        };
        c.finish()?;
        let m = u64::try_from(m).map_err(|_| c.err())?;
        let n = i64::try_from(n).map_err(|_| c.err())?;
        return TaggedPoint::sin_shift(m, n).map_err(|e| invalid(s, e));
    }
    let r = c.rational()?;
    c.finish()?;
    Ok(TaggedPoint::Rat(r))
}

fn ratio(r: &Q) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn offset(a: &Q) -> String {
    if a.is_negative() {
        format!("-{}", ratio(&-a))
    } else {
        format!("+{}", ratio(a))
    }
}

pub(super) fn print(p: &TaggedPoint) -> String {
    match p {
        TaggedPoint::Rat(r) => ratio(r),
        TaggedPoint::Surd(s) => format!("sqrt2*{}{}", ratio(s.b()), offset(s.a())),
        TaggedPoint::PiAffine(x) => format!("pi^{}*{}{}", x.k(), ratio(x.b()), offset(x.a())),
        TaggedPoint::PiAffineInv(x) => format!("pi^-{}*{}{}", x.k(), ratio(x.b()), offset(x.a())),
        TaggedPoint::SinShift(s) => {
            if s.n() < 0 {
                format!("sin({})-2*{}", s.m(), s.n().unsigned_abs())
            } else {
                format!("sin({})+2*{}", s.m(), s.n())
            }
        }
        TaggedPoint::CantorOracle(g) => format!("cantor:{}", g.name()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn parses_every_family() {
        assert_eq!(parse("3/4").unwrap(), TaggedPoint::ratio(3, 4));
        assert_eq!(parse("-6/8").unwrap(), TaggedPoint::ratio(-3, 4));
        assert_eq!(parse("0/1").unwrap(), TaggedPoint::ratio(0, 1));
        assert_eq!(parse("2").unwrap(), TaggedPoint::ratio(2, 1));
        assert_eq!(parse("sqrt2").unwrap(), TaggedPoint::surd(q(0, 1), q(1, 1)).unwrap());
        assert_eq!(parse("sqrt2*1/2-3/4").unwrap(), TaggedPoint::surd(q(-3, 4), q(1, 2)).unwrap());
        assert_eq!(parse("pi").unwrap(), TaggedPoint::pi_power(1));
        assert_eq!(parse("pi^3").unwrap(), TaggedPoint::pi_power(3));
        assert_eq!(parse("pi^-2*1/1+0/1").unwrap(), TaggedPoint::pi_power_inv(2));
        assert_eq!(parse("sin(3)+2*-1").unwrap(), TaggedPoint::sin_shift(3, -1).unwrap());
        assert_eq!(parse("sin(3)-2*1").unwrap(), TaggedPoint::sin_shift(3, -1).unwrap());
        assert_eq!(parse("cantor:thue-morse").unwrap(), TaggedPoint::cantor(CantorGenerator::ThueMorse));
    }

    #[test]
    fn rejects_malformed_points() {
        for bad in ["", "1/0", "sqrt3", "pi^", "pi^0", "sqrt2*0/1", "sin(0)", "sin(2", "cantor:x", "1/2+", "abc"] {
            assert!(parse(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn printing_is_canonical() {
        assert_eq!(print(&TaggedPoint::ratio(2, 1)), "2/1");
        assert_eq!(print(&TaggedPoint::surd(q(-1, 2), q(3, 1)).unwrap()), "sqrt2*3/1-1/2");
        assert_eq!(print(&TaggedPoint::pi_power(2)), "pi^2*1/1+0/1");
        assert_eq!(print(&TaggedPoint::sin_shift(7, -2).unwrap()), "sin(7)-2*2");
    }

    fn arb_q() -> impl Strategy<Value = Q> {
        (-1000i64..1000, 1i64..500).prop_map(|(n, d)| q(n, d))
    }

    fn arb_point() -> impl Strategy<Value = TaggedPoint> {
        let nz = || arb_q().prop_filter("nonzero", |b| !b.is_zero());
        prop_oneof![
            arb_q().prop_map(TaggedPoint::Rat),
            (arb_q(), nz()).prop_map(|(a, b)| TaggedPoint::surd(a, b).unwrap()),
            (arb_q(), nz(), 1u32..6).prop_map(|(a, b, k)| TaggedPoint::pi_affine(a, b, k).unwrap()),
            (arb_q(), nz(), 1u32..6).prop_map(|(a, b, k)| TaggedPoint::pi_affine_inv(a, b, k).unwrap()),
            (1u64..10_000, -50i64..50).prop_map(|(m, n)| TaggedPoint::sin_shift(m, n).unwrap()),
            prop::sample::select(CantorGenerator::ALL.to_vec()).prop_map(TaggedPoint::CantorOracle),
        ]
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(p in arb_point()) {
            let text = print(&p);
            let back = parse(&text).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(print(&back), text);
        }
    }
}
