//! Property suites for the core invariants.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use realzoo::cantorset::{in_cantor, intervals, locate};
use realzoo::conn::{node_entry, parse_dot, scenario_count, star_graph};
use realzoo::points::ternary_digit;
use realzoo::taxonomy::{admissible, enumerate_blocks, stats};
use realzoo::witness::{
    continuity_probe, default_spot_plans, default_steps, diff_quotients, dyadic_radii, ladder_points,
    signature_spot_check, spot_check_expr, Claim, ClaimKind, ClaimStatus, SpotStatus,
};
use realzoo::zoo::{declared_signature, eval, representative};
use realzoo::{
    CantorGenerator, CardinalLabel, Enclosure, FnExpr, Location, Membership, ProbePlan, TaggedPoint, Verdict, Q,
};

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn pow2_neg(p: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << p as usize)
}

fn pow3(n: u32) -> BigInt {
    BigInt::from(3).pow(n)
}

fn arb_q(max_den: i64, span: i64) -> impl Strategy<Value = Q> {
    (1..=max_den).prop_flat_map(move |d| (-span * d..=span * d, Just(d))).prop_map(|(n, d)| q(n, d))
}

fn arb_unit_q() -> impl Strategy<Value = Q> {
    (1i64..=3000).prop_flat_map(|d| (0..=d, Just(d))).prop_map(|(n, d)| q(n, d))
}

fn arb_nonzero(max_den: i64) -> impl Strategy<Value = Q> {
    arb_q(max_den, 4).prop_filter("nonzero", |x| !x.is_zero())
}

fn arb_point() -> impl Strategy<Value = TaggedPoint> {
    prop_oneof![
        arb_q(200, 5).prop_map(TaggedPoint::Rat),
        (arb_q(50, 3), arb_nonzero(50)).prop_map(|(a, b)| TaggedPoint::surd(a, b).unwrap()),
        (arb_q(50, 3), arb_nonzero(50), 1u32..=3).prop_map(|(a, b, k)| TaggedPoint::pi_affine(a, b, k).unwrap()),
        (arb_q(50, 3), arb_nonzero(50), 1u32..=3).prop_map(|(a, b, k)| TaggedPoint::pi_affine_inv(a, b, k).unwrap()),
        (1u64..=40, -3i64..=3).prop_map(|(m, n)| TaggedPoint::sin_shift(m, n).unwrap()),
        prop::sample::select(CantorGenerator::ALL.to_vec()).prop_map(TaggedPoint::cantor),
    ]
}

// ---------- points ----------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enclosures_agree_across_precisions(p in arb_point(), q1 in 1u32..60, extra in 1u32..60) {
        let q2 = q1 + extra;
        let a = p.enclose(q1);
        let b = p.enclose(q2);
        prop_assert!(a.width() <= pow2_neg(q1));
        prop_assert!(b.width() <= pow2_neg(q2));
        prop_assert!(a.intersects(&b));
    }

    #[test]
    fn ternary_digits_bracket_the_value(r in arb_unit_q()) {
        let p = TaggedPoint::Rat(r.clone());
        let mut partial = Q::zero();
        for m in 1..=30u32 {
            let d = ternary_digit(&p, m as u64, 1).unwrap();
            prop_assert!(d <= 2);
            partial += Q::new(BigInt::from(d), pow3(m));
            prop_assert!(partial <= r);
            prop_assert!(r <= &partial + Q::new(BigInt::one(), pow3(m)));
        }
    }

    #[test]
    fn digits_are_deterministic(p in arb_point(), i in 1u64..200) {
        if p.in_closed(&Q::zero(), &Q::one()) {
            prop_assert_eq!(ternary_digit(&p, i, 8), ternary_digit(&p, i, 8));
        }
    }
}

#[test]
fn is_rational_matches_tags() {
    let mut rng = StdRng::seed_from_u64(11);
    let rq = |rng: &mut StdRng| q(rng.random_range(-500..=500), rng.random_range(1..=97));
    for _ in 0..10_000 {
        let b = loop {
            let b = rq(&mut rng);
            if !b.is_zero() {
                break b;
            }
        };
        let a = rq(&mut rng);
        let k = rng.random_range(1..=4);
        let (p, rational) = match rng.random_range(0..6) {
            0 => (TaggedPoint::Rat(a), true),
            1 => (TaggedPoint::surd(a, b).unwrap(), false),
            2 => (TaggedPoint::pi_affine(a, b, k).unwrap(), false),
            3 => (TaggedPoint::pi_affine_inv(a, b, k).unwrap(), false),
            4 => (TaggedPoint::sin_shift(rng.random_range(1..=1000), rng.random_range(-9..=9)).unwrap(), false),
            _ => (TaggedPoint::cantor(CantorGenerator::ALL[rng.random_range(0..2)]), false),
        };
        assert_eq!(p.is_rational().is_some(), rational, "{p}");
    }
}

// ---------- cantorset ----------

#[test]
fn endpoints_are_members() {
    for n in 0..=8 {
        for iv in intervals(n).unwrap() {
            for e in [&iv.a, &iv.b] {
                assert_eq!(in_cantor(&TaggedPoint::Rat(e.clone()), 1), Membership::Yes, "{e}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn locate_is_nested(r in arb_unit_q(), n in 0u32..14) {
        let p = TaggedPoint::Rat(r.clone());
        if let Location::Inside { index } = locate(&p, n + 1, 1).unwrap() {
            prop_assert_eq!(locate(&p, n, 1).unwrap(), Location::Inside { index: index.div_ceil(2) });
        }
    }
}

// ---------- zoo ----------

#[test]
fn thomae_vanishes_at_irrationals() {
    let mut rng = StdRng::seed_from_u64(12);
    for i in 0..100 {
        let a = q(rng.random_range(-50..=50), rng.random_range(1..=20));
        let b = q(rng.random_range(1..=50), rng.random_range(1..=20));
        let p = match i % 4 {
            0 => TaggedPoint::surd(a, b).unwrap(),
            1 => TaggedPoint::pi_affine(a, b, 1 + i % 3).unwrap(),
            2 => TaggedPoint::sin_shift(1 + i as u64, 0).unwrap(),
            _ => TaggedPoint::pi_affine_inv(a, b, 1).unwrap(),
        };
        assert!(eval(&FnExpr::Thomae, &p, 30).unwrap().is_exact_zero(), "{p}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dirichlet_is_an_indicator(p in arb_point()) {
        let d = eval(&FnExpr::Dirichlet, &p, 20).unwrap();
        let want = if p.is_rational().is_some() { Q::one() } else { Q::zero() };
        prop_assert_eq!(d, Enclosure::exact(want));
    }

    #[test]
    fn weierstrass_contract_and_bound(x in arb_q(400, 3)) {
        let p = TaggedPoint::Rat(x);
        for prec in [10u32, 20, 30, 40] {
            let w = eval(&FnExpr::Weierstrass, &p, prec).unwrap();
            prop_assert!(w.width() <= pow2_neg(prec));
            let bound = q(3, 2) + w.width();
            prop_assert!(w.hi() <= &bound && w.lo() >= &-bound);
        }
    }

    #[test]
    fn fc_vanishes_at_irrationals(p in arb_point()) {
        if p.is_rational().is_none() {
            prop_assert!(eval(&FnExpr::FC, &p, 20).unwrap().is_exact_zero());
        }
    }

    #[test]
    fn zero_factor_forces_exact_zero(p in arb_point(), i in 1usize..=28, prec in 1u32..40) {
        let e = representative(i, 3).unwrap();
        let v = eval(&FnExpr::product([e.expr, FnExpr::zero()]), &p, prec).unwrap();
        prop_assert!(v.is_exact_zero());
    }

    #[test]
    fn eval_is_deterministic(p in arb_point(), i in 1usize..=28) {
        let e = representative(i, 3).unwrap();
        prop_assert_eq!(eval(&e.expr, &p, 24), eval(&e.expr, &p, 24));
    }
}

/// `Σ_n Σ_k (b-a)/2 - |x - (a+b)/2|` over level intervals containing `x`,
/// so that `f_C(x) = √3 · R` at rationals.
fn fc_rational_part(x: &Q, max_level: u32) -> Q {
    let mut total = Q::zero();
    for n in 1..=max_level {
        let w = Q::new(BigInt::one(), pow3(n));
        // enumerate left ends by binary counting over digits {0, 2}
        for bits in 0u64..(1 << n) {
            let mut num = BigInt::zero();
            for i in (0..n).rev() {
                num = num * 3 + BigInt::from(2 * ((bits >> i) & 1));
            }
            let a = Q::new(num, pow3(n));
            let b = &a + &w;
            if &a <= x && x <= &b {
                let mid = (&a + &b) / q(2, 1);
                total += &w / q(2, 1) - (x - mid).abs();
            }
        }
    }
    total
}

fn contains_root3_times(e: &Enclosure, r: &Q) -> bool {
    // √3·r with r >= 0 lies in [lo, hi]
    let target_sq = r * r * q(3, 1);
    let lo_ok = e.lo() <= &Q::zero() || e.lo() * e.lo() <= target_sq;
    let hi_ok = e.hi() >= &Q::zero() && e.hi() * e.hi() >= target_sq;
    lo_ok && hi_ok
}

#[test]
fn fc_at_low_level_endpoints_matches_direct_sum() {
    for n in 1..=4 {
        for iv in intervals(n).unwrap() {
            for e in [&iv.a, &iv.b] {
                let r = fc_rational_part(e, 9);
                // deeper levels only touch e at interval ends
                assert_eq!(r, fc_rational_part(e, n.max(1)), "{e}");
                let v = eval(&FnExpr::FC, &TaggedPoint::Rat(e.clone()), 30).unwrap();
                assert!(v.width() <= pow2_neg(30));
                assert!(contains_root3_times(&v, &r), "f_C({e}) = {v}, expected sqrt3 * {r}");
            }
        }
    }
}

#[test]
fn cantor_function_endpoint_values() {
    assert!(eval(&FnExpr::CantorFn, &TaggedPoint::ratio(0, 1), 30).unwrap().is_exact_zero());
    assert_eq!(eval(&FnExpr::CantorFn, &TaggedPoint::ratio(1, 1), 30).unwrap(), Enclosure::one());
}

// ---------- taxonomy ----------

#[test]
fn taxonomy_self_consistency() {
    let blocks = enumerate_blocks();
    assert!(blocks.iter().all(|b| admissible(&b.signature)));
    let continuous: Vec<usize> =
        blocks.iter().filter(|b| b.signature.discontinuity == CardinalLabel::Zero).map(|b| b.id).collect();
    assert_eq!(continuous, (22..=28).collect::<Vec<_>>());
    let s = stats();
    let count = |c| blocks.iter().filter(|b| b.block_cardinality == c).count();
    assert_eq!(count(CardinalLabel::TwoToContinuum), s.card_2c.count);
    assert_eq!(count(CardinalLabel::Continuum), s.card_c.count);
    for b in &blocks {
        assert_eq!(declared_signature(b.id).unwrap(), b.signature);
    }
}

// ---------- witness ----------

fn audit_falsified(expr: &FnExpr, plan: &ProbePlan, v: &Verdict) {
    if let Verdict::Falsified { witness, reference, gap } = v {
        let p = plan.precision * 2;
        let a = eval(expr, witness, p).unwrap();
        let b = eval(expr, reference, p).unwrap();
        let sep = a.separation(&b);
        assert!(sep.is_positive(), "gap vanished at {witness} vs {reference}");
        assert!(gap.lo() >= &plan.epsilon);
    }
}

fn audit_consistent(expr: &FnExpr, plan: &ProbePlan, v: &Verdict) {
    if let Verdict::Consistent { .. } = v {
        let r = plan.radii.last().unwrap();
        let fc = eval(expr, &plan.center, plan.precision).unwrap();
        for &k in &plan.ladders {
            for x in ladder_points(k, &plan.center, r) {
                let fx = eval(expr, &x, plan.precision).unwrap();
                // a certified violation here would contradict the verdict
                assert!(fx.separation(&fc) < plan.epsilon, "violation at {x} hidden by Consistent");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn falsified_verdicts_survive_refinement(c in arb_q(60, 2), which in 0usize..3) {
        let expr = [FnExpr::Dirichlet, FnExpr::Thomae, representative(4, 3).unwrap().expr][which].clone();
        let plan = ProbePlan::new(TaggedPoint::Rat(c)).with_epsilon(q(1, 1000));
        let v = continuity_probe(&expr, &plan);
        audit_falsified(&expr, &plan, &v);
        prop_assert_eq!(&v, &continuity_probe(&expr, &plan));
    }

    #[test]
    fn consistent_verdicts_pass_the_audit(c in arb_unit_q(), which in 0usize..3) {
        let expr = [FnExpr::Identity, FnExpr::CantorFn, representative(26, 3).unwrap().expr][which].clone();
        let plan = ProbePlan::new(TaggedPoint::Rat(c));
        let v = continuity_probe(&expr, &plan);
        audit_consistent(&expr, &plan, &v);
        audit_falsified(&expr, &plan, &v);
        prop_assert!(!v.is_falsified());
    }

    #[test]
    fn scaled_identity_quotients_are_exact(r in arb_q(100, 20), c in arb_q(100, 5)) {
        let expr = FnExpr::scale(r.clone(), FnExpr::Identity);
        let scan = diff_quotients(&expr, &TaggedPoint::Rat(c), &default_steps(), 30);
        for s in &scan.quotients {
            prop_assert_eq!(&s.quotient, &Enclosure::exact(r.clone()));
        }
        prop_assert_eq!(scan.verdict, Verdict::ConvergesTo { limit: Enclosure::exact(r) });
    }
}

#[test]
fn thomae_at_irrationals_is_consistent_and_audited() {
    for c in ["sqrt2", "sqrt2*1/3+1/5", "pi*1/7", "pi^-1"] {
        let plan = ProbePlan::new(c.parse().unwrap()).with_epsilon(q(1, 20));
        let v = continuity_probe(&FnExpr::Thomae, &plan);
        assert!(matches!(v, Verdict::Consistent { .. }), "{c}: {v:?}");
        audit_consistent(&FnExpr::Thomae, &plan, &v);
    }
}

#[test]
fn weierstrass_consistency_is_audited() {
    let plan = ProbePlan::new(TaggedPoint::ratio(1, 3)).with_radii(dyadic_radii(3, 24));
    let v = continuity_probe(&FnExpr::Weierstrass, &plan);
    assert!(matches!(v, Verdict::Consistent { .. }), "{v:?}");
    audit_consistent(&FnExpr::Weierstrass, &plan, &v);
}

#[test]
fn spot_checks_are_deterministic() {
    for i in [1usize, 11, 25, 28] {
        let e = representative(i, 3).unwrap();
        let plans = default_spot_plans(i).unwrap();
        assert_eq!(signature_spot_check(&e, &plans), signature_spot_check(&e, &plans));
    }
}

// ---------- conn ----------

#[test]
fn scenario_counts_are_powers_of_four() {
    for m in 2..=30u32 {
        let mut n = scenario_count(m);
        let four = num_bigint::BigUint::from(4u32);
        let mut k = 0u64;
        while n > num_bigint::BigUint::one() {
            assert!((&n % &four).is_zero(), "m = {m}");
            n /= &four;
            k += 1;
        }
        assert_eq!(k, (m as u64) * (m as u64 - 1) / 2);
    }
}

#[test]
fn star_multipliers_vanish_and_products_are_differentiable() {
    let g = star_graph();
    let mut rng = StdRng::seed_from_u64(13);
    let points: Vec<TaggedPoint> = (0..100)
        .map(|i| {
            let a = q(rng.random_range(-1000..=1000), rng.random_range(1..=100));
            match i % 3 {
                0 => TaggedPoint::Rat(a),
                1 => TaggedPoint::surd(a, q(1, rng.random_range(1..=9))).unwrap(),
                _ => TaggedPoint::pi_affine(a, q(rng.random_range(1..=9), 1), 1).unwrap(),
            }
        })
        .collect();
    for e in g.edges() {
        for p in &points {
            assert!(eval(&e.multiplier, p, 30).unwrap().is_exact_zero());
        }
        let src = representative(node_entry(&e.from).unwrap(), 3).unwrap();
        let product = FnExpr::product([src.expr, e.multiplier.clone()]);
        let target = declared_signature(28).unwrap();
        let pts = ["0", "1/3", "sqrt2", "pi", "-5/2", "7/2"];
        let claims: Vec<Claim> = [ClaimKind::Continuous, ClaimKind::Differentiable]
            .iter()
            .flat_map(|&k| pts.iter().map(move |s| Claim::new(k, ProbePlan::new(s.parse().unwrap()))))
            .collect();
        let rep = spot_check_expr(28, &product, &target, &claims).unwrap();
        assert_eq!(rep.status, SpotStatus::Pass, "{}", e.from);
        assert!(rep.results.iter().all(|r| r.status == ClaimStatus::Confirmed), "{}", e.from);
    }
}

#[test]
fn dot_structure_round_trips() {
    for g in [star_graph(), realzoo::conn::big_four_graph()] {
        let shape = parse_dot(&g.to_dot()).unwrap();
        assert_eq!(shape, g.shape());
        assert_eq!(parse_dot(&g.to_dot()).unwrap(), shape);
    }
}
