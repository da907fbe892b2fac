//! Fuzz tests against an exact rational oracle.
//!
//! Every XReal is a dyadic rational, so add/sub/mul/div have exact reference
//! results in `BigRational`. The interval tests check the containment
//! contract directly: for members x of A and y of B, op(x,y) must land in
//! op(A,B).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xlog::{Round, XBound, XInterval, XReal};

fn to_rational(x: &XReal) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let m = BigInt::from(x.mantissa_u128()) * BigInt::from(x.sign());
    let e: BigInt = x.exponent() - 127;
    let num;
    let den;
    if e >= BigInt::zero() {
        let sh: u64 = (&e).try_into().unwrap();
        num = m << sh as usize;
        den = BigInt::one();
    } else {
        let sh: u64 = (&-&e).try_into().unwrap();
        num = m;
        den = BigInt::one() << sh as usize;
    }
    BigRational::new(num, den)
}

fn random_xreal(rng: &mut ChaCha8Rng, prec: u32) -> XReal {
    let mant: u128 = rng.gen::<u128>() | (1 << 127);
    let mask = if prec == 128 { u128::MAX } else { !((1u128 << (128 - prec)) - 1) };
    let exp = rng.gen_range(-512i64..=512);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    XReal::from_parts(sign, mant & mask, BigInt::from(exp), prec).unwrap()
}

/// |computed - exact| <= 2^(1-prec) * |exact|
fn check_rel(computed: &XReal, exact: &BigRational, prec: u32, what: &str) {
    let c = to_rational(computed);
    let diff = (&c - exact).abs();
    if exact.is_zero() {
        assert!(diff.is_zero(), "{what}: nonzero result for exact zero");
        return;
    }
    let tol = exact.abs() * BigRational::new(BigInt::from(2), BigInt::one() << (prec as usize));
    assert!(diff <= tol, "{what}: relative error above 2^(1-prec)");
}

#[test]
fn arithmetic_agrees_with_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let n = 25_000; // x4 ops = 10^5 checked operations
    for i in 0..n {
        let prec = if i % 3 == 0 { 113 } else { 53 };
        let a = random_xreal(&mut rng, prec);
        let b = random_xreal(&mut rng, prec);
        let (ra, rb) = (to_rational(&a), to_rational(&b));
        check_rel(&a.add_rm(&b, prec, Round::Nearest), &(&ra + &rb), prec, "add");
        check_rel(&a.sub_rm(&b, prec, Round::Nearest), &(&ra - &rb), prec, "sub");
        check_rel(&a.mul_rm(&b, prec, Round::Nearest), &(&ra * &rb), prec, "mul");
        check_rel(
            &a.div_rm(&b, prec, Round::Nearest).unwrap(),
            &(&ra / &rb),
            prec,
            "div",
        );
        // Comparison agrees with the represented value.
        assert_eq!(a.cmp_value(&b), ra.cmp(&rb), "cmp");
    }
}

#[test]
fn directed_rounding_brackets_exact_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1cebeef);
    for _ in 0..5_000 {
        let a = random_xreal(&mut rng, 53);
        let b = random_xreal(&mut rng, 53);
        let exact = to_rational(&a) * to_rational(&b);
        let lo = to_rational(&a.mul_rm(&b, 53, Round::Floor));
        let hi = to_rational(&a.mul_rm(&b, 53, Round::Ceil));
        assert!(lo <= exact && exact <= hi, "directed mul must bracket");
        let exact_s = to_rational(&a) + to_rational(&b);
        let lo_s = to_rational(&a.add_rm(&b, 53, Round::Floor));
        let hi_s = to_rational(&a.add_rm(&b, 53, Round::Ceil));
        assert!(lo_s <= exact_s && exact_s <= hi_s, "directed add must bracket");
    }
}

fn random_interval(rng: &mut ChaCha8Rng) -> XInterval {
    let a = random_xreal(rng, 53);
    let b = random_xreal(rng, 53);
    if a <= b {
        XInterval::finite(a, b)
    } else {
        XInterval::finite(b, a)
    }
}

/// A member of the interval: endpoint or a dyadic point between them.
fn member(rng: &mut ChaCha8Rng, iv: &XInterval) -> XReal {
    let lo = iv.lo_real().unwrap().clone();
    let hi = iv.hi_real().unwrap().clone();
    match rng.gen_range(0..3) {
        0 => lo,
        1 => hi,
        _ => lo.add_rm(&hi, 64, Round::Nearest).mul_pow2(-1),
    }
}

#[test]
fn interval_containment_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let cases = 25_000; // x4 ops = 10^5 containment checks
    let mut violations = 0u64;
    for _ in 0..cases {
        let ia = random_interval(&mut rng);
        let ib = random_interval(&mut rng);
        let x = member(&mut rng, &ia);
        let y = member(&mut rng, &ib);
        let exact_sum = to_rational(&x) + to_rational(&y);
        let exact_diff = to_rational(&x) - to_rational(&y);
        let exact_prod = to_rational(&x) * to_rational(&y);
        let checks: [(&str, XInterval, BigRational); 3] = [
            ("add", ia.add(&ib), exact_sum),
            ("sub", ia.sub(&ib), exact_diff),
            ("mul", ia.mul(&ib), exact_prod),
        ];
        for (what, res, exact) in checks {
            if !rational_in(&res, &exact) {
                eprintln!("containment violation in {what}");
                violations += 1;
            }
        }
        // Division when the denominator interval excludes zero.
        if !ib.contains(&XReal::zero()) {
            let res = ia.div(&ib).unwrap();
            let exact = to_rational(&x) / to_rational(&y);
            if !rational_in(&res, &exact) {
                eprintln!("containment violation in div");
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0, "interval containment violations");
}

fn rational_in(iv: &XInterval, v: &BigRational) -> bool {
    let lo_ok = match iv.lo() {
        XBound::NegInf => true,
        XBound::Finite(l) => &to_rational(l) <= v,
        XBound::PosInf => false,
    };
    let hi_ok = match iv.hi() {
        XBound::PosInf => true,
        XBound::Finite(h) => v <= &to_rational(h),
        XBound::NegInf => false,
    };
    lo_ok && hi_ok
}

#[test]
fn ln_exp_roundtrip_within_budget() {
    // ln(exp(x)) must enclose x (widened only by the error budget) for
    // arguments up to +-10^6.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..300 {
        let mag = 10f64.powf(rng.gen_range(-3.0..6.0));
        let v = if rng.gen_bool(0.5) { mag } else { -mag };
        let x = XReal::from_f64(v, 53).unwrap();
        let iv = XInterval::point(x.clone());
        let (e, sat) = iv.exp(1 << 16);
        assert!(!sat);
        let l = e.ln().unwrap();
        // Composition budget: exp's relative enclosure width turns into an
        // absolute ln error of order 2^-53 (1 + |x|).
        let one = XReal::one(53);
        let w = one.add_rm(&x.abs(), 53, Round::Ceil).mul_pow2(-50);
        let lo = x.sub_rm(&w, 53, Round::Floor);
        let hi = x.add_rm(&w, 53, Round::Ceil);
        assert!(
            l.lo_real().unwrap() >= &lo && l.hi_real().unwrap() <= &hi,
            "ln(exp({v})) enclosure too wide: {l}"
        );
    }
}

#[test]
fn containment_monotonicity() {
    // A in A', B in B' => op(A,B) in op(A',B').
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2_000 {
        let a = random_interval(&mut rng);
        let b = random_interval(&mut rng);
        let widen = |iv: &XInterval, rng: &mut ChaCha8Rng| {
            let pad = random_xreal(rng, 53).abs();
            XInterval::finite(
                iv.lo_real().unwrap().sub_rm(&pad, 53, Round::Floor),
                iv.hi_real().unwrap().add_rm(&pad, 53, Round::Ceil),
            )
        };
        let aw = widen(&a, &mut rng);
        let bw = widen(&b, &mut rng);
        assert!(aw.add(&bw).contains_interval(&a.add(&b)));
        assert!(aw.mul(&bw).contains_interval(&a.mul(&b)));
        assert!(aw.sub(&bw).contains_interval(&a.sub(&b)));
    }
}
