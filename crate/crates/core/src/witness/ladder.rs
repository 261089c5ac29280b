//! Approach points near a center, each inside one decidable point family.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::enclosure::Enclosure;
use crate::points::{pow3, ternary_prefix, TaggedPoint};
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderKind {
    /// Simplest rationals on each side, plus `c ± r` at rational centers.
    Rational,
    /// `c ± √2·r/2`, or the `√2` coefficient nudged by `±r/2`.
    Surd,
    /// `c ± π·r/4`, or the `π^k` coefficient nudged by `±r/4^k`.
    Pi,
    /// Cantor-set interval endpoints within `r`.
    Cantor,
}

impl LadderKind {
    pub const ALL: [LadderKind; 4] = [LadderKind::Rational, LadderKind::Surd, LadderKind::Pi, LadderKind::Cantor];

    pub fn name(self) -> &'static str {
        match self {
            LadderKind::Rational => "rational",
            LadderKind::Surd => "surd",
            LadderKind::Pi => "pi",
            LadderKind::Cantor => "cantor",
        }
    }

    /// Whether ladder points around `center` stay inside a supported family.
    pub fn supports(self, center: &TaggedPoint) -> bool {
        match (self, center) {
            (LadderKind::Rational, _) => true,
            (LadderKind::Surd, TaggedPoint::Rat(_) | TaggedPoint::Surd(_)) => true,
            (LadderKind::Pi, TaggedPoint::Rat(_) | TaggedPoint::PiAffine(_) | TaggedPoint::PiAffineInv(_)) => true,
            (LadderKind::Cantor, TaggedPoint::Rat(r)) => r >= &Q::zero() && r <= &Q::one(),
            (LadderKind::Cantor, TaggedPoint::CantorOracle(_)) => true,
            _ => false,
        }
    }
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// The rational of smallest denominator (then smallest magnitude) in `[a, b]`.
pub fn simplest_between(a: &Q, b: &Q) -> Q {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if a <= &Q::zero() && b >= &Q::zero() {
        return Q::zero();
    }
    if b < &Q::zero() {
        return -simplest_positive(&-b, &-a);
    }
    simplest_positive(a, b)
}

fn simplest_positive(a: &Q, b: &Q) -> Q {
    let fa = a.floor();
    if &fa == a {
        return fa;
    }
    let next = &fa + Q::one();
    if &next <= b {
        return next;
    }
    // fa < a <= b < fa + 1
    let inner = simplest_positive(&(Q::one() / (b - &fa)), &(Q::one() / (a - &fa)));
    fa + Q::one() / inner
}

/// Ladder points of one kind at distance at most `r` from `center`,
/// excluding the center itself.
pub fn ladder_points(kind: LadderKind, center: &TaggedPoint, r: &Q) -> Vec<TaggedPoint> {
    let mut out = match kind {
        LadderKind::Rational => rational_ladder(center, r),
        LadderKind::Surd => match center {
            TaggedPoint::Rat(c) => {
                let h = r / q(2, 1);
                vec![
                    TaggedPoint::surd(c.clone(), h.clone()).expect("nonzero"),
                    TaggedPoint::surd(c.clone(), -h).expect("nonzero"),
                ]
            }
            TaggedPoint::Surd(_) => nudged(center, &(r / q(2, 1))),
            _ => Vec::new(),
        },
        LadderKind::Pi => match center {
            TaggedPoint::Rat(c) => {
                let h = r / q(4, 1);
                vec![
                    TaggedPoint::pi_affine(c.clone(), h.clone(), 1).expect("nonzero"),
                    TaggedPoint::pi_affine(c.clone(), -h, 1).expect("nonzero"),
                ]
            }
            TaggedPoint::PiAffine(p) => {
                let four_k = Q::from_integer(BigInt::from(4).pow(p.k()));
                nudged(center, &(r / four_k))
            }
            // |Δ(b π^-k)| = |Δb| π^-k < |Δb|
            TaggedPoint::PiAffineInv(_) => nudged(center, r),
            _ => Vec::new(),
        },
        LadderKind::Cantor => cantor_ladder(center, r),
    };
    out.retain(|p| p != center);
    out.dedup();
    out
}

fn nudged(center: &TaggedPoint, delta: &Q) -> Vec<TaggedPoint> {
    [delta.clone(), -delta.clone()].iter().filter_map(|d| center.nudge_coefficient(d)).collect()
}

fn rational_ladder(center: &TaggedPoint, r: &Q) -> Vec<TaggedPoint> {
    let half = r / q(2, 1);
    match center {
        TaggedPoint::Rat(c) => vec![
            TaggedPoint::Rat(simplest_between(&(c - r), &(c - &half))),
            TaggedPoint::Rat(simplest_between(&(c + &half), &(c + r))),
            TaggedPoint::Rat(c - r),
            TaggedPoint::Rat(c + r),
        ],
        _ => {
            let e = enclose_within(center, &(r / q(4, 1)));
            vec![
                TaggedPoint::Rat(simplest_between(&(e.hi() - r), e.lo())),
                TaggedPoint::Rat(simplest_between(e.hi(), &(e.lo() + r))),
            ]
        }
    }
}

/// An enclosure of the point no wider than `w`.
fn enclose_within(p: &TaggedPoint, w: &Q) -> Enclosure {
    let mut bits = 8;
    loop {
        let e = p.enclose(bits);
        if &e.width() <= w {
            return e;
        }
        bits += 8;
    }
}

fn cantor_ladder(center: &TaggedPoint, r: &Q) -> Vec<TaggedPoint> {
    // level n with 3^-n <= r
    let mut n = 0u32;
    let mut step = Q::one();
    while &step > r {
        n += 1;
        step /= q(3, 1);
    }
    let digits = match center {
        TaggedPoint::CantorOracle(g) => (1..=n as u64).map(|i| g.digit(i)).collect(),
        TaggedPoint::Rat(_) => match ternary_prefix(center, n, 1) {
            Ok(d) => d,
            Err(_) => return Vec::new(),
        },
        _ => return Vec::new(),
    };
    let c = match center {
        TaggedPoint::Rat(c) => Some(c.clone()),
        _ => None,
    };
    let mut num = BigInt::zero();
    for (i, &d) in digits.iter().enumerate() {
        if d == 1 {
            // in the gap (g1, g2) removed at level i + 1; its ends are in C
            let den = pow3(i as u32 + 1);
            let g1 = Q::new(&num * 3 + 1, den.clone());
            let g2 = Q::new(&num * 3 + 2, den);
            let c = c.expect("generator digits avoid 1");
            return [g1, g2].into_iter().filter(|g| (g - &c).abs() <= *r).map(TaggedPoint::Rat).collect();
        }
        num = num * 3 + BigInt::from(d);
    }
    let den = pow3(n);
    let a = Q::new(num.clone(), den.clone());
    let b = Q::new(num + 1, den);
    vec![TaggedPoint::Rat(a), TaggedPoint::Rat(b)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::CantorGenerator;

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&q(1, 3), &q(2, 3)), q(1, 2));
        assert_eq!(simplest_between(&q(-1, 3), &q(2, 3)), q(0, 1));
        assert_eq!(simplest_between(&q(-5, 7), &q(-2, 3)), q(-2, 3));
        assert_eq!(simplest_between(&q(13, 10), &q(7, 5)), q(4, 3));
        assert_eq!(simplest_between(&q(3, 1), &q(7, 2)), q(3, 1));
        assert_eq!(simplest_between(&q(31, 10), &q(32, 10)), q(16, 5));
    }

    /// Brute force oracle over small denominators.
    fn brute(a: &Q, b: &Q) -> Q {
        for d in 1i64.. {
            let lo = (a * Q::from_integer(d.into())).ceil().to_integer();
            let hi = (b * Q::from_integer(d.into())).floor().to_integer();
            if lo <= hi {
                let pick = if lo <= BigInt::zero() && hi >= BigInt::zero() {
                    BigInt::zero()
                } else if hi < BigInt::zero() {
                    hi
                } else {
                    lo
                };
                return Q::new(pick, d.into());
            }
        }
        unreachable!()
    }

    #[test]
    fn simplest_matches_brute_force() {
        for an in -40i64..40 {
            for w in 1i64..6 {
                let a = q(an, 17);
                let b = &a + q(w, 23);
                assert_eq!(simplest_between(&a, &b), brute(&a, &b), "[{a}, {b}]");
            }
        }
    }

    #[test]
    fn ladders_stay_within_radius() {
        let centers = [
            TaggedPoint::ratio(1, 2),
            TaggedPoint::ratio(1, 4),
            TaggedPoint::surd(q(0, 1), q(1, 1)).unwrap(),
            TaggedPoint::pi_power(2),
            TaggedPoint::pi_power_inv(1),
            TaggedPoint::cantor(CantorGenerator::Fibonacci),
        ];
        for c in &centers {
            let ce = c.enclose(80);
            for m in [3u32, 9, 16] {
                let r = Q::new(BigInt::one(), BigInt::one() << m as usize);
                for kind in LadderKind::ALL {
                    if !kind.supports(c) {
                        continue;
                    }
                    for p in ladder_points(kind, c, &r) {
                        let pe = p.enclose(80);
                        assert!(pe.max_distance(&ce) <= &r + q(1, 1 << 40), "{kind:?} {p} from {c}");
                        assert_ne!(&p, c);
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_families() {
        let r = q(1, 64);
        let c = TaggedPoint::ratio(0, 1);
        assert!(ladder_points(LadderKind::Surd, &c, &r).iter().all(|p| p.family() == "surd"));
        assert!(ladder_points(LadderKind::Pi, &c, &r).iter().all(|p| p.family() == "pi-affine"));
        // 1/4 lies in C: both ends of its level-4 interval are offered
        assert_eq!(ladder_points(LadderKind::Cantor, &TaggedPoint::ratio(1, 4), &r).len(), 2);
        // 1/2 is at distance 1/6 from C
        assert!(ladder_points(LadderKind::Cantor, &TaggedPoint::ratio(1, 2), &r).is_empty());
        assert!(!LadderKind::Surd.supports(&TaggedPoint::pi_power(1)));
        assert!(!LadderKind::Cantor.supports(&TaggedPoint::ratio(2, 1)));
    }
}
