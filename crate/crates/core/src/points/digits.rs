//! Base-3 digits of tagged points.
//!
//! Rationals use the canonical expansion: when `x = m/3^k` has two ternary
//! expansions, the one free of the digit 1 is chosen if it exists, otherwise
//! the terminating one. With this rule "x is in the Cantor set iff every
//! digit is 0 or 2" holds for every rational in `[0, 1]`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::{pow3, TaggedPoint};
use crate::enclosure::Enclosure;
use crate::numeric::digits_for_bits;
use crate::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigitError {
    #[error("digit {index} not resolved within the refinement budget")]
    Unresolved { index: u64 },
    #[error("point lies outside [0, 1]")]
    OutOfRange,
}

/// Aperiodic `{0, 2}` digit generators backing Cantor-set points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CantorGenerator {
    /// `d_i = 2·t(i-1)` with `t` the Thue–Morse sequence.
    ThueMorse,
    /// `d_i = 2·f(i)` with `f` the Fibonacci word.
    Fibonacci,
}

impl CantorGenerator {
    pub const ALL: [CantorGenerator; 2] = [CantorGenerator::ThueMorse, CantorGenerator::Fibonacci];

    pub fn name(self) -> &'static str {
        match self {
            CantorGenerator::ThueMorse => "thue-morse",
            CantorGenerator::Fibonacci => "fibonacci",
        }
    }

    /// The `i`-th ternary digit (`i >= 1`), always 0 or 2.
    pub fn digit(self, i: u64) -> u8 {
        debug_assert!(i >= 1);
        match self {
            CantorGenerator::ThueMorse => 2 * ((i - 1).count_ones() % 2) as u8,
            CantorGenerator::Fibonacci => {
                let n = i as u128;
                2 * (2 + floor_phi_times(n) - floor_phi_times(n + 1)) as u8
            }
        }
    }

    /// Sum of the first `m` digits as `numerator / 3^m`.
    fn partial_numerator(self, m: u32) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 1..=m as u64 {
            acc = acc * 3 + self.digit(i);
        }
        acc
    }

    pub fn enclose(self, bits: u32) -> Enclosure {
        let m = digits_for_bits(3, bits).max(1);
        let den = pow3(m);
        let s = self.partial_numerator(m);
        // tail digits lie in {0, 2}: the remainder is in [0, 3^-m]
        Enclosure::new(Q::new(s.clone(), den.clone()), Q::new(s + 1, den))
    }
}

/// `⌊n·φ⌋` with `φ` the golden ratio, exactly.
fn floor_phi_times(n: u128) -> u128 {
    let s = (5 * n * n).isqrt();
    (n + s) / 2
}

impl fmt::Display for CantorGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CantorGenerator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CantorGenerator::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| format!("unknown Cantor generator `{s}`"))
    }
}

/// The eventually periodic canonical expansion of a rational in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryExpansion {
    pub prefix: Vec<u8>,
    pub period: Vec<u8>,
}

impl TernaryExpansion {
    /// Digit `i` (1-based).
    pub fn digit(&self, i: u64) -> u8 {
        let i = (i - 1) as usize;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }
}

/// Lazy canonical digits of a rational in `[0, 1]`.
#[derive(Clone, Debug)]
pub struct DigitStream {
    mode: Mode,
    pos: u64,
}

#[derive(Clone, Debug)]
enum Mode {
    /// Triadic rationals: finite prefix, then a constant tail (0 or 2).
    Finite { prefix: Vec<u8>, tail: u8 },
    /// Long division by a denominator not a power of 3.
    Division { rem: BigInt, den: BigInt, start: BigInt },
}

/// Whether the stream state recurs; used for exact period detection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StreamState {
    Prefix(u64),
    Tail(u8),
    Rem(BigInt),
}

impl DigitStream {
    /// `None` if `x` lies outside `[0, 1]`.
    pub fn new(x: &Q) -> Option<DigitStream> {
        if x < &Q::zero() || x > &Q::one() {
            return None;
        }
        let den = x.denom().clone();
        let mode = if x.is_one() {
            Mode::Finite { prefix: Vec::new(), tail: 2 }
        } else if let Some(k) = power_of_three(&den) {
            let mut digits = Vec::with_capacity(k as usize);
            let mut rem = x.numer().clone();
            for _ in 0..k {
                let t = &rem * BigInt::from(3);
                let (d, r) = t.div_rem(&den);
                digits.push(d.to_u8().unwrap_or(0));
                rem = r;
            }
            match digits.last().copied() {
                Some(1) if !digits[..digits.len() - 1].contains(&1) => {
                    let n = digits.len();
                    digits[n - 1] = 0;
                    Mode::Finite { prefix: digits, tail: 2 }
                }
                _ => Mode::Finite { prefix: digits, tail: 0 },
            }
        } else {
            let start = x.numer().clone();
            Mode::Division { rem: start.clone(), den, start }
        };
        Some(DigitStream { mode, pos: 0 })
    }

    /// State before emitting the next digit.
    pub fn state(&self) -> StreamState {
        match &self.mode {
            Mode::Finite { prefix, tail } => {
                if (self.pos as usize) < prefix.len() {
                    StreamState::Prefix(self.pos)
                } else {
                    StreamState::Tail(*tail)
                }
            }
            Mode::Division { rem, .. } => StreamState::Rem(rem.clone()),
        }
    }

    /// Random access to digit `i` (1-based) without advancing the stream.
    pub fn digit_at(&self, i: u64) -> u8 {
        match &self.mode {
            Mode::Finite { prefix, tail } => prefix.get((i - 1) as usize).copied().unwrap_or(*tail),
            Mode::Division { den, start, .. } => {
                let r = start * BigInt::from(3).modpow(&BigInt::from(i - 1), den) % den;
                ((r * BigInt::from(3)) / den).to_u8().unwrap_or(0)
            }
        }
    }

    pub fn position(&self) -> u64 {
        self.pos
    }
}

impl Iterator for DigitStream {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        let d = match &mut self.mode {
            Mode::Finite { prefix, tail } => prefix.get(self.pos as usize).copied().unwrap_or(*tail),
            Mode::Division { rem, den, .. } => {
                let t = &*rem * BigInt::from(3);
                let (d, r) = t.div_rem(den);
                *rem = r;
                d.to_u8().unwrap_or(0)
            }
        };
        self.pos += 1;
        Some(d)
    }
}

fn power_of_three(n: &BigInt) -> Option<u32> {
    let three = BigInt::from(3);
    let mut m = n.clone();
    let mut k = 0;
    while (&m % &three).is_zero() {
        m /= &three;
        k += 1;
    }
    m.is_one().then_some(k)
}

/// Full canonical expansion (prefix and period) of a rational in `[0, 1]`.
///
/// Runs in time proportional to the period, which can be as large as the
/// denominator.
pub fn canonical_expansion(x: &Q) -> Option<TernaryExpansion> {
    let mut stream = DigitStream::new(x)?;
    if let Mode::Finite { prefix, tail } = &stream.mode {
        return Some(TernaryExpansion { prefix: prefix.clone(), period: vec![*tail] });
    }
    let mut seen: HashMap<StreamState, usize> = HashMap::new();
    let mut digits = Vec::new();
    loop {
        let st = stream.state();
        if let Some(&at) = seen.get(&st) {
            let period = digits.split_off(at);
            return Some(TernaryExpansion { prefix: digits, period });
        }
        seen.insert(st, digits.len());
        digits.push(stream.next().unwrap_or(0));
    }
}

/// The `i`-th canonical ternary digit of a point in `[0, 1]`.
pub fn ternary_digit(p: &TaggedPoint, i: u64, budget: u32) -> Result<u8, DigitError> {
    match p {
        TaggedPoint::Rat(r) => {
            let s = DigitStream::new(r).ok_or(DigitError::OutOfRange)?;
            Ok(s.digit_at(i))
        }
        TaggedPoint::CantorOracle(g) => Ok(g.digit(i)),
        _ => {
            let n = u32::try_from(i).map_err(|_| DigitError::Unresolved { index: i })?;
            Ok(*ternary_prefix(p, n, budget)?.last().unwrap_or(&0))
        }
    }
}

/// The first `n` canonical digits of a point in `[0, 1]`.
///
/// Irrational points are separated from every digit boundary by refining
/// their enclosure, for at most `budget` rounds.
pub fn ternary_prefix(p: &TaggedPoint, n: u32, budget: u32) -> Result<Vec<u8>, DigitError> {
    match p {
        TaggedPoint::Rat(r) => {
            let s = DigitStream::new(r).ok_or(DigitError::OutOfRange)?;
            Ok(s.take(n as usize).collect())
        }
        TaggedPoint::CantorOracle(g) => Ok((1..=n as u64).map(|i| g.digit(i)).collect()),
        _ => {
            if !p.in_closed(&Q::zero(), &Q::one()) {
                return Err(DigitError::OutOfRange);
            }
            if n == 0 {
                return Ok(Vec::new());
            }
            let scale = Q::from_integer(pow3(n));
            let base = (n as u64 * 1585 / 1000) as u32 + 8;
            let mut resolved = 0u64;
            for round in 0..budget.max(1) {
                let bits = base + 16u32.saturating_mul(1 << round.min(16));
                let e = p.enclose(bits);
                let lo = (e.lo() * &scale).floor().to_integer();
                let hi_scaled = e.hi() * &scale;
                // the value is irrational, hence strictly below hi
                let hi = hi_scaled.ceil().to_integer() - 1;
                if lo == hi {
                    return Ok(to_base3(&lo, n));
                }
                resolved = common_prefix(&to_base3(&lo, n), &to_base3(&hi.max(lo.clone()), n));
            }
            Err(DigitError::Unresolved { index: resolved + 1 })
        }
    }
}

fn to_base3(v: &BigInt, n: u32) -> Vec<u8> {
    let mut out = vec![0u8; n as usize];
    let mut m = v.clone();
    let three = BigInt::from(3);
    for slot in out.iter_mut().rev() {
        let (q, r) = m.div_rem(&three);
        *slot = r.to_u8().unwrap_or(0);
        m = q;
    }
    out
}

fn common_prefix(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).take_while(|(x, y)| x == y).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    /// Independent oracle: plain long division, no canonical adjustment.
    fn long_division(n: i64, d: i64, count: usize) -> Vec<u8> {
        let mut r = n;
        (0..count)
            .map(|_| {
                r *= 3;
                let dig = r / d;
                r %= d;
                dig as u8
            })
            .collect()
    }

    #[test]
    fn quarter_alternates_zero_two() {
        let p = TaggedPoint::ratio(1, 4);
        assert_eq!(long_division(1, 4, 6), vec![0, 2, 0, 2, 0, 2]);
        for i in 1..=20u64 {
            let d = ternary_digit(&p, i, 4).unwrap();
            assert_eq!(d, if i % 2 == 1 { 0 } else { 2 });
        }
    }

    #[test]
    fn canonical_rule_prefers_digit_free_of_one() {
        let third = TaggedPoint::ratio(1, 3);
        assert_eq!(ternary_prefix(&third, 4, 1).unwrap(), vec![0, 2, 2, 2]);
        // 2/3 = 0.2000... already avoids 1
        assert_eq!(ternary_prefix(&TaggedPoint::ratio(2, 3), 3, 1).unwrap(), vec![2, 0, 0]);
        // 4/9 = 0.11 and 0.1022...: both contain 1, keep terminating
        assert_eq!(ternary_prefix(&TaggedPoint::ratio(4, 9), 3, 1).unwrap(), vec![1, 1, 0]);
        // 7/9 = 0.21 -> 0.20222...
        assert_eq!(ternary_prefix(&TaggedPoint::ratio(7, 9), 4, 1).unwrap(), vec![2, 0, 2, 2]);
        assert_eq!(ternary_prefix(&TaggedPoint::ratio(1, 1), 3, 1).unwrap(), vec![2, 2, 2]);
        assert_eq!(ternary_prefix(&TaggedPoint::ratio(0, 1), 3, 1).unwrap(), vec![0, 0, 0]);
        assert_eq!(ternary_prefix(&TaggedPoint::ratio(1, 2), 3, 1).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn expansions_have_prefix_and_period() {
        let e = canonical_expansion(&q(1, 4)).unwrap();
        assert_eq!(e, TernaryExpansion { prefix: vec![], period: vec![0, 2] });
        let e = canonical_expansion(&q(1, 6)).unwrap();
        // 1/6 = 0.0111...
        assert_eq!(e.prefix, vec![0]);
        assert_eq!(e.period, vec![1]);
        let e = canonical_expansion(&q(5, 7)).unwrap();
        assert_eq!(e.prefix.len(), 0);
        assert_eq!(e.period.len(), 6);
        for i in 1..=30 {
            assert_eq!(e.digit(i), long_division(5, 7, 30)[(i - 1) as usize]);
        }
    }

    #[test]
    fn random_access_matches_stream() {
        for (n, d) in [(3, 7), (10, 13), (1, 10), (5, 81), (2, 9)] {
            let s = DigitStream::new(&q(n, d)).unwrap();
            let seq: Vec<u8> = s.clone().take(40).collect();
            for i in 1..=40u64 {
                assert_eq!(s.digit_at(i), seq[(i - 1) as usize], "{n}/{d} digit {i}");
            }
        }
    }

    #[test]
    fn irrational_digits_match_float() {
        // √2 - 1 = 0.4142..., digits by repeated tripling in f64 for a short prefix
        let p = TaggedPoint::surd(q(-1, 1), q(1, 1)).unwrap();
        let mut x = 2f64.sqrt() - 1.0;
        let mut expect = Vec::new();
        for _ in 0..20 {
            x *= 3.0;
            let d = x.floor();
            expect.push(d as u8);
            x -= d;
        }
        assert_eq!(ternary_prefix(&p, 20, 8).unwrap(), expect);
        assert_eq!(ternary_digit(&p, 5, 8).unwrap(), expect[4]);
    }

    #[test]
    fn out_of_range_points() {
        assert_eq!(ternary_digit(&TaggedPoint::ratio(3, 2), 1, 1), Err(DigitError::OutOfRange));
        assert_eq!(ternary_prefix(&TaggedPoint::pi_power(1), 2, 3), Err(DigitError::OutOfRange));
    }

    #[test]
    fn generators_are_two_valued_and_enclosed() {
        for g in CantorGenerator::ALL {
            assert!((1..200).all(|i| matches!(g.digit(i), 0 | 2)));
            let e = g.enclose(30);
            assert!(e.meets_width(30));
            assert_eq!(g.to_string().parse::<CantorGenerator>().unwrap(), g);
        }
        let tm: Vec<u8> = (1..=8).map(|i| CantorGenerator::ThueMorse.digit(i)).collect();
        assert_eq!(tm, vec![0, 2, 2, 0, 2, 0, 0, 2]);
        let fib: Vec<u8> = (1..=8).map(|i| CantorGenerator::Fibonacci.digit(i)).collect();
        assert_eq!(fib, vec![0, 2, 0, 0, 2, 0, 2, 0]);
    }
}
