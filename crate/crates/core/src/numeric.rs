//! Certified enclosures of π, square roots and trigonometric values.
//!
//! Everything is computed in binary fixed point over big integers with an
//! explicit error count in units of the last place, then widened into a
//! rational [`Enclosure`]. Angles are taken in units of π so that rational
//! arguments can be reduced modulo 2 exactly.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::enclosure::{ceil_to_grid, floor_to_grid, pow2, Enclosure};
use crate::Q;

static PI_CACHE: Mutex<Option<(u32, Enclosure)>> = Mutex::new(None);

/// Fixed-point `atan(1/x)` at `w` fractional bits, with its error bound in ulps.
fn atan_inv_fixed(x: u32, w: u32) -> (BigInt, u64) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut term = pow2(w) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &x2;
        k += 1;
    }
    (sum, 3 * k + 2)
}

fn compute_pi(bits: u32) -> Enclosure {
    let mut w = bits + 24;
    loop {
        let (a5, e5) = atan_inv_fixed(5, w);
        let (a239, e239) = atan_inv_fixed(239, w);
        let m = a5 * 16 - a239 * 4;
        let err = BigInt::from(16 * e5 + 4 * e239);
        // width = 2 err / 2^w must not exceed 2^-bits
        if (&err << (bits as usize + 1)) <= pow2(w) {
            let den = pow2(w);
            return Enclosure::new(Q::new(&m - &err, den.clone()), Q::new(&m + &err, den));
        }
        w += 16;
    }
}

/// Enclosure of π with width at most `2^-bits`.
pub fn pi(bits: u32) -> Enclosure {
    let need = bits + 1;
    {
        let cache = PI_CACHE.lock().unwrap_or_else(|e| e.into_inner());
        if let Some((have, e)) = cache.as_ref() {
            if *have >= need {
                return e.clone().round_out(bits + 2);
            }
        }
    }
    let target = need.max(256);
    let target = {
        let cache = PI_CACHE.lock().unwrap_or_else(|e| e.into_inner());
        match cache.as_ref() {
            Some((have, _)) => target.max(have.saturating_mul(2)),
            None => target,
        }
    };
    let fresh = compute_pi(target);
    let out = fresh.clone().round_out(bits + 2);
    let mut cache = PI_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    let replace = match cache.as_ref() {
        Some((have, _)) => *have < target,
        None => true,
    };
    if replace {
        *cache = Some((target, fresh));
    }
    out
}

/// Enclosure of `√n` for a non-negative integer, width at most `2^-bits`.
pub fn sqrt_int(n: u64, bits: u32) -> Enclosure {
    let scaled = BigInt::from(n) << (2 * bits as usize);
    let s = scaled.sqrt();
    let den = pow2(bits);
    if &s * &s == scaled {
        return Enclosure::exact(Q::new(s, den));
    }
    Enclosure::new(Q::new(s.clone(), den.clone()), Q::new(s + 1, den))
}

/// `y mod 2` in `[0, 2)`.
pub fn reduce_mod2(y: &Q) -> Q {
    let two = Q::from_integer(BigInt::from(2));
    let k = (y / &two).floor();
    y - k * two
}

/// `cos(πr)` for `r` in `[0, 2)` when the value is rational.
fn cos_pi_rational_value(r: &Q) -> Option<Q> {
    let den = r.denom().to_u32()?;
    let num = r.numer().to_i64()?;
    let q = |n: i64, d: i64| Q::new(n.into(), d.into());
    match (num, den) {
        (0, 1) => Some(q(1, 1)),
        (1, 1) => Some(q(-1, 1)),
        (1, 2) | (3, 2) => Some(q(0, 1)),
        (1, 3) | (5, 3) => Some(q(1, 2)),
        (2, 3) | (4, 3) => Some(q(-1, 2)),
        _ => None,
    }
}

enum Kernel {
    Cos,
    Sin,
}

/// Fixed-point Taylor sum of `cos(θ)` or `sin(θ)` for `0 <= θ = t/2^w <= 1`.
/// Returns the value and its error bound in ulps.
fn taylor_fixed(kind: &Kernel, t: &BigInt, w: u32) -> (BigInt, u64) {
    let one = pow2(w);
    let x2 = (t * t) >> w as usize;
    let (mut term, k_off) = match kind {
        Kernel::Cos => (one, 0u64),
        Kernel::Sin => (t.clone(), 1u64),
    };
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        let d = (2 * k - 1 + k_off) * (2 * k + k_off);
        term = ((&term * &x2) >> w as usize) / BigInt::from(d);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    (sum, 6 * (k + 1))
}

/// `cos(π s)` or `sin(π s)` for rational `s` in `[0, 1/4]`, width about `2^-bits`.
fn trig_small(kind: Kernel, s: &Q, bits: u32) -> Enclosure {
    let mut w = bits + 16;
    loop {
        let p = pi(w);
        let den = pow2(w);
        // θ = π s enclosed on the 2^-w grid
        let tlo = floor_to_grid(&(p.lo() * s), w);
        let thi = ceil_to_grid(&(p.hi() * s), w);
        let t = (tlo.clone() * Q::from_integer(den.clone())).to_integer();
        let spread = ((thi - tlo) * Q::from_integer(den.clone())).to_integer();
        let (m, err) = taylor_fixed(&kind, &t, w);
        let e = spread + BigInt::from(err);
        let out = Enclosure::new(Q::new(&m - &e, den.clone()), Q::new(&m + &e, den));
        if out.meets_width(bits) {
            return out;
        }
        w += 16;
    }
}

/// Enclosure of `cos(π y)` for every `y` in the given interval.
///
/// Point arguments whose cosine is rational (multiples of 1/2 and 1/3)
/// give exact results. The width is at most `2^-bits` plus `π` times the
/// width of `y`.
pub fn cos_pi(y: &Enclosure, bits: u32) -> Enclosure {
    let one = Q::one();
    if let Some(v) = y.exact_value() {
        let r = reduce_mod2(v);
        if let Some(c) = cos_pi_rational_value(&r) {
            return Enclosure::exact(c);
        }
    }
    let mid = y.midpoint();
    let rad = y.width() / Q::from_integer(2.into());
    let mut r = reduce_mod2(&mid);
    if r > one {
        r = Q::from_integer(2.into()) - r;
    }
    let half = Q::new(1.into(), 2.into());
    let quarter = Q::new(1.into(), 4.into());
    let mut negate = false;
    if r > half {
        r = &one - r;
        negate = true;
    }
    let core = if r > quarter {
        trig_small(Kernel::Sin, &(&half - &r), bits + 2)
    } else {
        trig_small(Kernel::Cos, &r, bits + 2)
    };
    let core = if negate { core.neg() } else { core };
    // |cos(πy) - cos(π mid)| <= π |y - mid| < (16/5) rad
    let slack = rad * Q::new(16.into(), 5.into());
    let widened = Enclosure::new(core.lo() - &slack, core.hi() + &slack);
    widened.clamp(&-one.clone(), &one).round_out(bits + 3)
}

/// Enclosure of `sin(π y)`.
pub fn sin_pi(y: &Enclosure, bits: u32) -> Enclosure {
    let half = Q::new(1.into(), 2.into());
    cos_pi(&y.add_rational(&-half), bits)
}

/// Enclosure of `sin(m)` (radians) for a nonzero integer `m`.
pub fn sin_integer(m: i64, bits: u32) -> Enclosure {
    if m == 0 {
        return Enclosure::zero();
    }
    let mag = (m.unsigned_abs() as f64).log2().ceil() as u32 + 1;
    let mut extra = mag + 6;
    loop {
        let p = pi(bits + extra);
        let mq = Q::from_integer(m.into());
        // y = m / π
        let a = &mq / p.lo();
        let b = &mq / p.hi();
        let y = Enclosure::new(a, b);
        let out = sin_pi(&y, bits + 1);
        if out.meets_width(bits) {
            return out;
        }
        extra += 16;
    }
}

/// Enclosure of `π^k` for `k >= 0`, width at most `2^-bits`.
pub fn pi_pow(k: u32, bits: u32) -> Enclosure {
    if k == 0 {
        return Enclosure::one();
    }
    // d(π^k) <= k 4^(k-1) dπ
    let mut extra = 2 * k + (32 - k.leading_zeros()) + 2;
    loop {
        let out = pi(bits + extra).pow(k);
        if out.meets_width(bits) {
            return out.round_out(bits + 2);
        }
        extra += 8;
    }
}

/// Enclosure of `π^-k` for `k >= 1`, width at most `2^-bits`.
pub fn pi_pow_inv(k: u32, bits: u32) -> Enclosure {
    let mut extra = 4;
    loop {
        let p = pi_pow(k, bits + extra);
        let out = p.recip().expect("π^k is positive");
        if out.meets_width(bits) {
            return out.round_out(bits + 2);
        }
        extra += 8;
    }
}

/// Smallest `n` with `base^n >= 2^bits`, for small integer bases.
pub(crate) fn digits_for_bits(base: u32, bits: u32) -> u32 {
    let target = pow2(bits);
    let b = BigInt::from(base);
    let mut acc = BigInt::one();
    let mut n = 0;
    while acc < target {
        acc *= &b;
        n += 1;
    }
    n
}

/// `⌈log2(|r|)⌉` clamped below at zero; a cheap magnitude estimate.
pub(crate) fn log2_ceil(r: &Q) -> u32 {
    let a = r.abs();
    if a <= Q::one() {
        return 0;
    }
    let c = a.ceil().to_integer();
    let bitlen = c.bits() as u32;
    if c.is_one() {
        0
    } else {
        bitlen
    }
}
