//! The middle-thirds Cantor set: level intervals, point localization and
//! membership.
//!
//! Level `n` consists of `2^n` closed intervals of length `3^-n`. Interval
//! `k` (1-based) starts at `Σ d_i/3^i` where `d_1 … d_n` is the binary
//! expansion of `k - 1` with each bit doubled.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::enclosure::fmt_ratio;
use crate::points::{ternary_prefix, DigitError, DigitStream, TaggedPoint};
use crate::Q;

pub const DEFAULT_MAX_LEVEL: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CantorError {
    #[error("level {level} exceeds the maximum {max}")]
    LevelTooLarge { level: u32, max: u32 },
    #[error("point lies outside [0, 1]")]
    OutOfRange,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorInterval {
    pub level: u32,
    /// 1-based position within the level.
    pub index: u64,
    pub a: Q,
    pub b: Q,
}

impl CantorInterval {
    pub fn length(&self) -> Q {
        &self.b - &self.a
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.a <= x && x <= &self.b
    }

    /// CSV row `n,k,a,b` with exact `p/q` fields.
    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.level, self.index, fmt_ratio(&self.a), fmt_ratio(&self.b))
    }
}

/// Where a point sits relative to the level sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Location {
    /// Inside interval `index` of the queried level.
    Inside { index: u64 },
    /// First removed at `exit_level`, inside the open middle third `gap`.
    Outside {
        exit_level: u32,
        #[serde(serialize_with = "ser_gap")]
        gap: (Q, Q),
    },
    /// A digit could not be resolved within the refinement budget.
    Unknown { digit: u64 },
}

fn ser_gap<S: serde::Serializer>(gap: &(Q, Q), s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&fmt_ratio(&gap.0))?;
    t.serialize_element(&fmt_ratio(&gap.1))?;
    t.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    Yes,
    /// Not in the set; `exit_level` is the first level whose intervals miss
    /// the point (0 for points outside `[0, 1]`).
    No {
        exit_level: u64,
    },
    Unknown,
}

/// Interval `index` (1-based) of level `level`.
pub fn interval(level: u32, index: u64) -> CantorInterval {
    let bits = index - 1;
    let mut num = BigInt::zero();
    for i in 0..level {
        let bit = (bits >> (level - 1 - i)) & 1;
        num = num * 3 + BigInt::from(2 * bit);
    }
    let den = BigInt::from(3).pow(level);
    let a = Q::new(num.clone(), den.clone());
    let b = Q::new(num + 1, den);
    CantorInterval { level, index, a, b }
}

/// The `2^n` intervals of level `n`, in order.
#[derive(Clone, Debug)]
pub struct Intervals {
    level: u32,
    next: u64,
    end: u64,
}

impl Iterator for Intervals {
    type Item = CantorInterval;

    fn next(&mut self) -> Option<CantorInterval> {
        if self.next >= self.end {
            return None;
        }
        self.next += 1;
        Some(interval(self.level, self.next))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Intervals {}

pub fn intervals(n: u32) -> Result<Intervals, CantorError> {
    intervals_up_to(n, DEFAULT_MAX_LEVEL)
}

pub fn intervals_up_to(n: u32, max: u32) -> Result<Intervals, CantorError> {
    if n > max || n > 63 {
        return Err(CantorError::LevelTooLarge { level: n, max: max.min(63) });
    }
    Ok(Intervals { level: n, next: 0, end: 1u64 << n })
}

/// Interval index at level `digits.len()` for a digit prefix free of 1.
fn index_of(digits: &[u8]) -> u64 {
    digits.iter().fold(0u64, |acc, &d| (acc << 1) | u64::from(d / 2)) + 1
}

fn location_from_digits(digits: &[u8]) -> Location {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (i, &d) in digits.iter().enumerate() {
        num *= 3;
        den *= 3;
        if d == 1 {
            let a = Q::new(num.clone(), den.clone());
            let step = Q::new(BigInt::one(), den);
            return Location::Outside {
                exit_level: (i + 1) as u32,
                gap: (&a + &step, a + step * Q::from_integer(2.into())),
            };
        }
        num += BigInt::from(d);
    }
    Location::Inside { index: index_of(digits) }
}

/// Locates `p` among the level-`n` intervals.
pub fn locate(p: &TaggedPoint, n: u32, budget: u32) -> Result<Location, CantorError> {
    if !p.in_closed(&Q::zero(), &Q::one()) {
        return Err(CantorError::OutOfRange);
    }
    match ternary_prefix(p, n, budget) {
        Ok(digits) => Ok(location_from_digits(&digits)),
        Err(DigitError::Unresolved { index }) => Ok(Location::Unknown { digit: index }),
        Err(DigitError::OutOfRange) => Err(CantorError::OutOfRange),
    }
}

/// Cantor-set membership.
///
/// Rationals are decided exactly from their eventually periodic expansion.
/// Generator-backed points are members by construction. Other irrational
/// points are scanned for a digit 1 up to `budget` digits.
pub fn in_cantor(p: &TaggedPoint, budget: u32) -> Membership {
    if !p.in_closed(&Q::zero(), &Q::one()) {
        return Membership::No { exit_level: 0 };
    }
    match p {
        TaggedPoint::Rat(r) => {
            let mut stream = DigitStream::new(r).expect("checked range");
            let mut seen = HashSet::new();
            loop {
                if !seen.insert(stream.state()) {
                    return Membership::Yes;
                }
                if stream.next() == Some(1) {
                    return Membership::No { exit_level: stream.position() };
                }
            }
        }
        TaggedPoint::CantorOracle(_) => Membership::Yes,
        _ => {
            let mut n = 16u32.min(budget.max(1));
            loop {
                match ternary_prefix(p, n, 12) {
                    Ok(digits) => {
                        if let Some(i) = digits.iter().position(|&d| d == 1) {
                            return Membership::No { exit_level: i as u64 + 1 };
                        }
                    }
                    Err(_) => return Membership::Unknown,
                }
                if n >= budget {
                    return Membership::Unknown;
                }
                n = (n * 2).min(budget);
            }
        }
    }
}
