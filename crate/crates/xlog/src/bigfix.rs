//! Fixed-point kernels on arbitrary-precision integers.
//!
//! A value "at scale s" is a `BigInt` v representing the real number v / 2^s.
//! Every kernel works internally at `scale + GUARD_BITS` and returns a value
//! whose absolute error is at most [`KERNEL_ERR_ULPS`] ulps at the requested
//! scale. Callers that need directed bounds widen by that many ulps before
//! rounding.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

/// Guaranteed bound, in ulps at the requested scale, on the absolute error of
/// every kernel in this module.
pub const KERNEL_ERR_ULPS: u64 = 4;

const GUARD_BITS: u64 = 64;

/// Floor-shift v down by `k` bits (toward negative infinity).
pub fn shr_floor(v: &BigInt, k: u64) -> BigInt {
    v >> k as usize
}

/// v * w at scale s (inputs and output at scale s), floor-rounded.
pub fn mul_fix(v: &BigInt, w: &BigInt, scale: u64) -> BigInt {
    shr_floor(&(v * w), scale)
}

/// v / w at scale s (inputs and output at scale s), floor-rounded. w != 0.
pub fn div_fix(v: &BigInt, w: &BigInt, scale: u64) -> BigInt {
    let num: BigInt = v << scale as usize;
    num.div_floor(w)
}

/// Integer square root of a nonnegative value at scale s, result at scale s.
pub fn sqrt_fix(v: &BigInt, scale: u64) -> BigInt {
    assert!(!v.is_negative(), "sqrt_fix of negative value");
    let shifted: BigUint = (v << scale as usize).to_biguint().expect("nonnegative");
    BigInt::from_biguint(Sign::Plus, shifted.sqrt())
}

/// atanh(1/q) = sum_{k>=0} 1 / ((2k+1) q^(2k+1)), q >= 2, at scale s.
fn atanh_recip(q: u64, scale: u64) -> BigInt {
    let ws = scale + GUARD_BITS;
    let q = BigInt::from(q);
    let q2 = &q * &q;
    // p_k = 1/q^(2k+1) at work scale; per-step relative decay keeps the
    // accumulated floor error bounded by a small constant.
    let mut p = (BigInt::one() << ws as usize).div_floor(&q);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !p.is_zero() {
        sum += p.clone().div_floor(&BigInt::from(2 * k + 1));
        p = p.div_floor(&q2);
        k += 1;
    }
    shr_floor(&sum, GUARD_BITS)
}

/// atan(1/q) = sum_{k>=0} (-1)^k / ((2k+1) q^(2k+1)), q >= 2, at scale s.
fn atan_recip(q: u64, scale: u64) -> BigInt {
    let ws = scale + GUARD_BITS;
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let mut p = (BigInt::one() << ws as usize).div_floor(&q);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !p.is_zero() {
        let term = p.clone().div_floor(&BigInt::from(2 * k + 1));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        p = p.div_floor(&q2);
        k += 1;
    }
    shr_floor(&sum, GUARD_BITS)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum NamedConst {
    Ln2,
    Log2E,
    Pi,
    Ln10,
}

static CONST_CACHE: Mutex<Option<HashMap<NamedConst, (u64, BigInt)>>> = Mutex::new(None);

fn cached_const(which: NamedConst, scale: u64, compute: impl Fn(u64) -> BigInt) -> BigInt {
    {
        let mut guard = CONST_CACHE.lock().expect("const cache poisoned");
        let map = guard.get_or_insert_with(HashMap::new);
        if let Some((s, v)) = map.get(&which) {
            if *s >= scale {
                return shr_floor(v, s - scale);
            }
        }
    }
    // Compute outside the lock: the closures for derived constants call back
    // into this cache. Headroom keeps slightly growing requests from
    // recomputing every time.
    let store_scale = scale + scale / 8 + GUARD_BITS;
    let v = compute(store_scale);
    let out = shr_floor(&v, store_scale - scale);
    let mut guard = CONST_CACHE.lock().expect("const cache poisoned");
    let map = guard.get_or_insert_with(HashMap::new);
    match map.get(&which) {
        Some((s, _)) if *s >= store_scale => {}
        _ => {
            map.insert(which, (store_scale, v));
        }
    }
    out
}

/// ln 2 at scale s. |err| <= KERNEL_ERR_ULPS ulps.
pub fn ln2(scale: u64) -> BigInt {
    cached_const(NamedConst::Ln2, scale, |s| atanh_recip(3, s) << 1)
}

/// log2(e) = 1/ln 2 at scale s.
pub fn log2e(scale: u64) -> BigInt {
    cached_const(NamedConst::Log2E, scale, |s| {
        let l2 = ln2(s + GUARD_BITS);
        let one = BigInt::one() << (2 * (s + GUARD_BITS)) as usize;
        shr_floor(&one.div_floor(&l2), GUARD_BITS)
    })
}

/// ln 10 = 3 ln 2 + 2 atanh(1/9) at scale s.
pub fn ln10(scale: u64) -> BigInt {
    cached_const(NamedConst::Ln10, scale, |s| {
        ln2(s) * 3 + (atanh_recip(9, s) << 1)
    })
}

/// pi = 16 atan(1/5) - 4 atan(1/239) at scale s.
pub fn pi(scale: u64) -> BigInt {
    cached_const(NamedConst::Pi, scale, |s| {
        atan_recip(5, s) * 16 - atan_recip(239, s) * 4
    })
}

/// e^x for x in [0, ln 2 + 1/4], input and output at scale s.
pub fn exp_frac(x: &BigInt, scale: u64) -> BigInt {
    assert!(!x.is_negative(), "exp_frac domain");
    let ws = scale + GUARD_BITS;
    let xs: BigInt = x << GUARD_BITS as usize;
    let one = BigInt::one() << ws as usize;
    let mut term = one.clone();
    let mut sum = one;
    let mut k: u64 = 1;
    while !term.is_zero() {
        term = shr_floor(&(&term * &xs), ws).div_floor(&BigInt::from(k));
        sum += &term;
        k += 1;
    }
    shr_floor(&sum, GUARD_BITS)
}

/// ln x for x in [1/2, 4), input and output at scale s.
///
/// Uses ln x = 2 atanh((x-1)/(x+1)). The absolute error is bounded by
/// KERNEL_ERR_ULPS; callers needing high relative accuracy near x = 1 must
/// raise the scale to cover the cancellation in x - 1.
pub fn ln_near_one(x: &BigInt, scale: u64) -> BigInt {
    let ws = scale + GUARD_BITS;
    let xs: BigInt = x << GUARD_BITS as usize;
    let one = BigInt::one() << ws as usize;
    let num: BigInt = &xs - &one;
    let den: BigInt = &xs + &one;
    // atanh is odd: run the series on |t| and restore the sign at the end,
    // keeping the floor-division drift one-sided.
    let negate = num.is_negative();
    let t = (num.abs() << ws as usize).div_floor(&den);
    // t <= 3/5 at ws; series sum t^(2k+1)/(2k+1).
    let t2 = shr_floor(&(&t * &t), ws);
    let mut p = t.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !p.is_zero() {
        sum += p.clone().div_floor(&BigInt::from(2 * k + 1));
        p = shr_floor(&(&p * &t2), ws);
        k += 1;
    }
    let r = shr_floor(&(sum << 1), GUARD_BITS);
    if negate {
        -r
    } else {
        r
    }
}

/// ln v for a positive v at scale s. Returns (value at scale s, error bound
/// in ulps at scale s). Handles any magnitude by splitting off powers of two.
pub fn ln_fix(v: &BigInt, scale: u64) -> (BigInt, BigInt) {
    assert!(v.is_positive(), "ln_fix domain");
    let b = v.bits() as i64;
    let k = b - 1 - scale as i64; // v = m * 2^k with m in [1, 2)
    let m = if k >= 0 { v >> k as usize } else { v << (-k) as usize };
    let lnm = ln_near_one(&m, scale);
    let l = lnm + BigInt::from(k) * ln2(scale);
    let err = BigInt::from(KERNEL_ERR_ULPS) * (k.unsigned_abs() + 2);
    (l, err)
}

/// sin x for x in [0, pi], input and output at scale s.
pub fn sin_fix(x: &BigInt, scale: u64) -> BigInt {
    let ws = scale + GUARD_BITS;
    let pi_ws = pi(ws);
    let mut xs: BigInt = x << GUARD_BITS as usize;
    // Reduce to [0, pi/2] via sin(x) = sin(pi - x).
    if &xs << 1usize > pi_ws.clone() {
        xs = &pi_ws - &xs;
    }
    if xs.is_negative() {
        // x slightly above pi after rounding.
        return BigInt::zero();
    }
    let x2 = shr_floor(&(&xs * &xs), ws);
    let mut term = xs.clone();
    let mut sum = xs;
    let mut k: u64 = 1;
    while !term.is_zero() {
        term = shr_floor(&(&term * &x2), ws)
            .div_floor(&BigInt::from((2 * k) * (2 * k + 1)));
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    shr_floor(&sum, GUARD_BITS)
}

/// Arithmetic-geometric mean of a and b (both positive) at scale s.
pub fn agm_fix(a: &BigInt, b: &BigInt, scale: u64) -> BigInt {
    let ws = scale + GUARD_BITS;
    let mut a: BigInt = a << GUARD_BITS as usize;
    let mut b: BigInt = b << GUARD_BITS as usize;
    loop {
        let diff: BigInt = (&a - &b).abs();
        if diff.bits() <= 2 {
            break;
        }
        let am = (&a + &b) >> 1usize;
        let gm = sqrt_fix(&mul_fix(&a, &b, ws), ws);
        a = am;
        b = gm;
    }
    shr_floor(&a, GUARD_BITS)
}
