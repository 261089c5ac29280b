//! The Weierstrass series, the Cantor function and the Cantor-level bump sums.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::EvalError;
use crate::enclosure::{pow2, Enclosure};
use crate::numeric::{cos_pi, digits_for_bits, log2_ceil, reduce_mod2, sqrt_int};
use crate::points::{pow3, ternary_prefix, DigitError, DigitStream, StreamState, TaggedPoint};
use crate::Q;

/// The two bump shapes on an interval `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BumpKind {
    /// `√3((b-a)/2 - |x - (a+b)/2|)`, the building block of `f_C`.
    T1,
    /// `(b-a)(1 - cos(2π(x-a)/(b-a)))`, the building block of `g_C`.
    T2,
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn pow3_neg(n: u32) -> Q {
    Q::new(BigInt::one(), pow3(n))
}

fn bits_of(n: usize) -> u32 {
    usize::BITS - n.max(1).leading_zeros()
}

/// Number `N` of Weierstrass terms (`n = 0..N-1`) whose tail
/// `Σ_{n>=N} 3^-n = 3^(1-N)/2` is at most `2^-(precision+1)`.
pub fn weierstrass_truncation(precision: u32) -> u32 {
    digits_for_bits(3, precision) + 1
}

/// Smallest level cutoff `M >= 1` whose tail bound is at most `2^-(precision+1)`:
/// `(√3/4)·3^-M` for [`BumpKind::T1`] and `3^-M` for [`BumpKind::T2`].
pub fn fc_gc_truncation(kind: BumpKind, precision: u32) -> u32 {
    match kind {
        // (√3/4)·3^-M <= 2^-(p+1)  <=>  4·9^M >= 3·4^p
        BumpKind::T1 => {
            let rhs = BigInt::from(3) * pow2(2 * precision);
            let mut m = 1u32;
            let mut nine = BigInt::from(9);
            while BigInt::from(4) * &nine < rhs {
                nine *= 9;
                m += 1;
            }
            m
        }
        BumpKind::T2 => digits_for_bits(3, precision + 1).max(1),
    }
}

/// Exact `W(x)` when every term of the series has a rational cosine,
/// which happens exactly for `x` with denominator 1, 2 or 3.
pub fn weierstrass_exact(x: &Q) -> Option<Q> {
    if x.denom() > &BigInt::from(3) {
        return None;
    }
    let twenty_one = Q::from_integer(21.into());
    let mut states: Vec<Q> = Vec::new();
    let mut y = reduce_mod2(x);
    let start = loop {
        if let Some(pos) = states.iter().position(|s| s == &y) {
            break pos;
        }
        states.push(y.clone());
        y = reduce_mod2(&(&y * &twenty_one));
    };
    let c: Vec<Q> =
        states.iter().map(|s| cos_pi(&Enclosure::exact(s.clone()), 8).exact_value().cloned()).collect::<Option<_>>()?;
    let mut head = Q::zero();
    for (i, ci) in c[..start].iter().enumerate() {
        head += ci * pow3_neg(i as u32);
    }
    let len = (c.len() - start) as u32;
    let mut period = Q::zero();
    for (j, cj) in c[start..].iter().enumerate() {
        period += cj * pow3_neg(j as u32);
    }
    let geo = Q::from_integer(pow3(len)) / Q::from_integer(pow3(len) - 1);
    Some(head + pow3_neg(start as u32) * period * geo)
}

pub(super) fn weierstrass(p: &TaggedPoint, w: u32) -> Enclosure {
    if let Some(x) = p.is_rational() {
        if let Some(v) = weierstrass_exact(x) {
            return Enclosure::exact(v);
        }
    }
    let n = weierstrass_truncation(w + 1);
    let tail = pow3_neg(n - 1) / q(2, 1);
    let tb = w + 4 + bits_of(n as usize);
    let base = match p.is_rational() {
        Some(x) => Enclosure::exact(x.clone()),
        // each term amplifies the argument error by 7^n
        None => p.enclose(w + 6 + 3 * n),
    };
    let two = q(2, 1);
    let mut mult = BigInt::one();
    let mut sum = Enclosure::zero();
    for i in 0..n {
        let y = base.scale(&Q::from_integer(mult.clone()));
        let shift = (y.lo() / &two).floor() * &two;
        let y = if y.is_exact() { Enclosure::exact(reduce_mod2(y.lo())) } else { y.add_rational(&-shift) };
        sum = sum.add(&cos_pi(&y, tb).scale(&pow3_neg(i)));
        mult *= 21;
    }
    sum.add(&Enclosure::new(-tail.clone(), tail))
}

/// Cantor-function value from a digit prefix free of the stopping rule.
fn dyadic_from_bits(bits: &[u8]) -> Q {
    let mut num = BigInt::zero();
    for &b in bits {
        num = num * 2 + BigInt::from(b);
    }
    Q::new(num, pow2(bits.len() as u32))
}

const CANTOR_STATE_CAP: usize = 1 << 14;

fn cantor_rational(x: &Q, w: u32) -> Enclosure {
    let mut stream = DigitStream::new(x).expect("caller checked range");
    let mut seen: HashMap<StreamState, usize> = HashMap::new();
    let mut bits: Vec<u8> = Vec::new();
    loop {
        if bits.len() >= CANTOR_STATE_CAP && bits.len() >= w as usize + 2 {
            let lo = dyadic_from_bits(&bits);
            let step = Q::new(BigInt::one(), pow2(bits.len() as u32));
            return Enclosure::new(lo.clone(), lo + step);
        }
        if let Some(&start) = seen.get(&stream.state()) {
            let head = dyadic_from_bits(&bits[..start]);
            let period = &bits[start..];
            let mut per = BigInt::zero();
            for &b in period {
                per = per * 2 + BigInt::from(b);
            }
            let cyc = Q::new(per, pow2(period.len() as u32) - 1);
            return Enclosure::exact(head + cyc / Q::from_integer(pow2(start as u32)));
        }
        if bits.len() < CANTOR_STATE_CAP {
            seen.insert(stream.state(), bits.len());
        }
        let d = stream.next().expect("infinite stream");
        if d == 1 {
            let mut v = dyadic_from_bits(&bits);
            v += Q::new(BigInt::one(), pow2(bits.len() as u32 + 1));
            return Enclosure::exact(v);
        }
        bits.push(d / 2);
    }
}

fn cantor_from_digits(digits: impl IntoIterator<Item = u8>) -> Enclosure {
    let mut bits = Vec::new();
    for d in digits {
        if d == 1 {
            let v = dyadic_from_bits(&bits) + Q::new(BigInt::one(), pow2(bits.len() as u32 + 1));
            return Enclosure::exact(v);
        }
        bits.push(d / 2);
    }
    let lo = dyadic_from_bits(&bits);
    let step = Q::new(BigInt::one(), pow2(bits.len() as u32));
    Enclosure::new(lo.clone(), lo + step)
}

pub(super) fn cantor_fn(p: &TaggedPoint, w: u32, budget: u32) -> Result<Enclosure, EvalError> {
    if p.compare(&Q::zero()).is_le() {
        return Ok(Enclosure::zero());
    }
    if p.compare(&Q::one()).is_ge() {
        return Ok(Enclosure::one());
    }
    let m = w + 2;
    match p {
        TaggedPoint::Rat(x) => Ok(cantor_rational(x, w)),
        TaggedPoint::CantorOracle(g) => Ok(cantor_from_digits((1..=m as u64).map(|i| g.digit(i)))),
        _ => match ternary_prefix(p, m, budget) {
            Ok(d) => Ok(cantor_from_digits(d)),
            Err(DigitError::Unresolved { index }) => Err(EvalError::BudgetExhausted(format!(
                "ternary digit {index} of {p} not resolved within budget {budget}"
            ))),
            Err(DigitError::OutOfRange) => unreachable!("range checked above"),
        },
    }
}

/// Sum of the level bumps at a rational `x` in `[0, 1]`, times `D(x)`.
pub(super) fn bump_sum(kind: BumpKind, p: &TaggedPoint, w: u32) -> Enclosure {
    let Some(x) = p.is_rational() else {
        return Enclosure::zero();
    };
    let Some(mut stream) = DigitStream::new(x) else {
        return Enclosure::zero();
    };
    let m = fc_gc_truncation(kind, w + 1);
    let tb = w + 4 + bits_of(m as usize);
    let mut a = Q::zero();
    let mut step = Q::one();
    let mut r_sum = Q::zero();
    let mut t2_sum = Enclosure::zero();
    let mut finite = false;
    for _ in 1..=m {
        let d = stream.next().expect("infinite stream");
        if d == 1 {
            finite = true;
            break;
        }
        step /= q(3, 1);
        a += &step * Q::from_integer(d.into());
        let b = &a + &step;
        if x == &a || x == &b {
            finite = true;
            break;
        }
        match kind {
            BumpKind::T1 => {
                let mid = &a + &step / q(2, 1);
                r_sum += &step / q(2, 1) - (x - mid).abs();
            }
            BumpKind::T2 => {
                let arg = (x - &a) * q(2, 1) / &step;
                let c = cos_pi(&Enclosure::exact(arg), tb);
                t2_sum = t2_sum.add(&c.neg().add_rational(&Q::one()).scale(&step));
            }
        }
    }
    match kind {
        BumpKind::T1 => {
            let r = if finite {
                Enclosure::exact(r_sum)
            } else {
                Enclosure::new(r_sum.clone(), r_sum + pow3_neg(m) / q(4, 1))
            };
            if r.is_exact_zero() {
                return r;
            }
            sqrt_int(3, w + 3).mul(&r)
        }
        BumpKind::T2 => {
            if finite {
                t2_sum
            } else {
                t2_sum.add(&Enclosure::new(Q::zero(), pow3_neg(m)))
            }
        }
    }
}

fn bump_on(kind: BumpKind, a: &Q, b: &Q, x: &Enclosure, bits: u32) -> Enclosure {
    let len = b - a;
    match kind {
        BumpKind::T1 => {
            let mid = (a + b) / q(2, 1);
            let r = x.add_rational(&-mid).abs().neg().add_rational(&(&len / q(2, 1)));
            let r = r.clamp(&Q::zero(), &(&len / q(2, 1)));
            if r.is_exact_zero() {
                return r;
            }
            sqrt_int(3, bits + 2 + log2_ceil(&len)).mul(&r)
        }
        BumpKind::T2 => {
            let y = x.add_rational(&-a.clone()).scale(&(q(2, 1) / &len));
            let c = cos_pi(&y, bits + 2 + log2_ceil(&len));
            c.neg().add_rational(&Q::one()).scale(&len)
        }
    }
}

/// `T^(1)_{a,b}` or `T^(2)_{a,b}` at `p`, zero outside `[a, b]`.
pub fn bump_value(kind: BumpKind, a: &Q, b: &Q, p: &TaggedPoint, precision: u32) -> Enclosure {
    if a >= b || !p.in_closed(a, b) {
        return Enclosure::zero();
    }
    let mut guard = 4;
    loop {
        let x = p.enclose(precision + guard);
        let v = bump_on(kind, a, b, &x, precision + guard);
        if v.is_exact() {
            return v;
        }
        if v.meets_width(precision + 1) {
            return v.round_out(precision + 2);
        }
        guard = guard * 2 + 8;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(e: &Enclosure) -> Q {
        e.exact_value().cloned().expect("exact")
    }

    #[test]
    fn weierstrass_cutoffs() {
        assert_eq!(weierstrass_truncation(0), 1);
        assert_eq!(weierstrass_truncation(1), 2);
        assert_eq!(weierstrass_truncation(53), 35);
        for p in 0..80 {
            let n = weierstrass_truncation(p);
            let tail = |n: u32| Q::new(BigInt::from(3), pow3(n) * 2);
            let bound = Q::new(BigInt::one(), pow2(p + 1));
            assert!(tail(n) <= bound);
            if n > 1 {
                assert!(tail(n - 1) > bound, "not minimal at {p}");
            }
        }
    }

    #[test]
    fn bump_cutoffs() {
        assert_eq!(fc_gc_truncation(BumpKind::T1, 0), 1);
        assert_eq!(fc_gc_truncation(BumpKind::T2, 3), 3);
        assert_eq!(fc_gc_truncation(BumpKind::T1, 20), 13);
        assert_eq!(fc_gc_truncation(BumpKind::T2, 20), 14);
        for p in 0..60 {
            let m = fc_gc_truncation(BumpKind::T1, p);
            let ok = |m: u32| {
                let lhs = (3.0f64.sqrt() / 4.0) * 3f64.powi(-(m as i32));
                lhs <= 2f64.powi(-(p as i32) - 1)
            };
            assert!(ok(m));
            assert!(m == 1 || !ok(m - 1));
        }
    }

    #[test]
    fn exact_weierstrass_values() {
        assert_eq!(weierstrass_exact(&q(0, 1)), Some(q(3, 2)));
        assert_eq!(weierstrass_exact(&q(1, 1)), Some(q(-3, 2)));
        assert_eq!(weierstrass_exact(&q(1, 2)), Some(q(0, 1)));
        // cos(π/3) = 1/2, then every later argument is odd
        assert_eq!(weierstrass_exact(&q(1, 3)), Some(q(0, 1)));
        // cos(2π/3) = -1/2, then every later argument is even
        assert_eq!(weierstrass_exact(&q(2, 3)), Some(q(0, 1)));
        assert_eq!(weierstrass_exact(&q(1, 4)), None);
    }

    #[test]
    fn weierstrass_matches_float_partial_sums() {
        for &(n, d) in &[(1i64, 7i64), (3, 10), (-5, 11), (13, 4)] {
            let x = n as f64 / d as f64;
            // terms beyond n = 8 are below 2e-4 and lose accuracy in f64
            let approx: f64 = (0..8).map(|k| (21f64.powi(k) * std::f64::consts::PI * x).cos() / 3f64.powi(k)).sum();
            let e = weierstrass(&TaggedPoint::ratio(n, d), 20);
            let mid = num_traits::ToPrimitive::to_f64(&e.midpoint()).unwrap();
            assert!((mid - approx).abs() < 1e-3, "{n}/{d}: {mid} vs {approx}");
        }
    }

    #[test]
    fn cantor_rationals() {
        assert_eq!(exact(&cantor_rational(&q(1, 3), 10)), q(1, 2));
        assert_eq!(exact(&cantor_rational(&q(1, 4), 10)), q(1, 3));
        assert_eq!(exact(&cantor_rational(&q(3, 4), 10)), q(2, 3));
        assert_eq!(exact(&cantor_rational(&q(1, 2), 10)), q(1, 2));
        assert_eq!(exact(&cantor_rational(&q(2, 9), 10)), q(1, 4));
        assert_eq!(exact(&cantor_rational(&q(0, 1), 10)), q(0, 1));
        assert_eq!(exact(&cantor_rational(&q(1, 1), 10)), q(1, 1));
    }

    #[test]
    fn bump_sums_at_known_points() {
        // 1/2 lies in the first removed gap: no level contributes
        assert!(bump_sum(BumpKind::T1, &TaggedPoint::ratio(1, 2), 20).is_exact_zero());
        // 1/6 is the midpoint of [0, 1/3] and leaves at level 2
        let v = bump_sum(BumpKind::T1, &TaggedPoint::ratio(1, 6), 30);
        assert!(v.contains(&q(0, 1)) || v.lo() > &q(0, 1));
        let want = 3f64.sqrt() / 6.0;
        let got = num_traits::ToPrimitive::to_f64(&v.midpoint()).unwrap();
        assert!((got - want).abs() < 1e-8);
        let g = bump_sum(BumpKind::T2, &TaggedPoint::ratio(1, 6), 30);
        assert_eq!(g.exact_value(), Some(&q(2, 3)));
        assert!(bump_sum(BumpKind::T1, &TaggedPoint::ratio(2, 1), 20).is_exact_zero());
    }

    #[test]
    fn bump_examples() {
        let half = TaggedPoint::ratio(1, 2);
        let v = bump_value(BumpKind::T1, &q(0, 1), &q(1, 1), &half, 30);
        let s = 3f64.sqrt() / 2.0;
        assert!(v.width() <= Q::new(BigInt::one(), pow2(30)));
        assert!((num_traits::ToPrimitive::to_f64(&v.midpoint()).unwrap() - s).abs() < 1e-8);
        assert!(bump_value(BumpKind::T1, &q(0, 1), &q(1, 1), &TaggedPoint::ratio(0, 1), 30).is_exact_zero());
        assert_eq!(bump_value(BumpKind::T2, &q(0, 1), &q(1, 1), &half, 30).exact_value(), Some(&q(2, 1)));
        assert!(bump_value(BumpKind::T2, &q(0, 1), &q(1, 1), &TaggedPoint::ratio(1, 1), 8).is_exact_zero());
        assert!(bump_value(BumpKind::T2, &q(0, 1), &q(1, 1), &TaggedPoint::ratio(3, 1), 8).is_exact_zero());
        let s2 = TaggedPoint::surd(q(-1, 1), q(1, 1)).unwrap();
        let t = bump_value(BumpKind::T1, &q(0, 1), &q(1, 1), &s2, 30);
        let want = 3f64.sqrt() * (0.5 - (2f64.sqrt() - 1.5).abs());
        assert!((num_traits::ToPrimitive::to_f64(&t.midpoint()).unwrap() - want).abs() < 1e-8);
    }
}
