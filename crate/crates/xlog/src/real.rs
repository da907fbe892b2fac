//! Extended-range reals: a sign, a binary-normalized mantissa of configurable
//! precision, and an arbitrary-precision power-of-two exponent.
//!
//! The represented value is `sign * (mant / 2^127) * 2^exp` with
//! `mant in [2^127, 2^128)`, so the exponent field is exactly the floor of
//! log2 |x|. Exponents are `BigInt`s: quantities like 2^(10^5000) are
//! representable, which is the whole point of the type.

use crate::bigfix;
use crate::XError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

/// Rounding direction for an operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Round to nearest, ties to even.
    Nearest,
    /// Round toward negative infinity.
    Floor,
    /// Round toward positive infinity.
    Ceil,
}

impl Round {
    /// The opposite directed mode (Nearest maps to itself).
    pub fn flip(self) -> Round {
        match self {
            Round::Nearest => Round::Nearest,
            Round::Floor => Round::Ceil,
            Round::Ceil => Round::Floor,
        }
    }
}

static DEFAULT_PREC: AtomicU32 = AtomicU32::new(53);

/// Current default mantissa precision in bits (53 unless overridden).
pub fn default_precision() -> u32 {
    DEFAULT_PREC.load(AtomicOrdering::Relaxed)
}

/// Set the default mantissa precision. Clamped to [24, 128].
pub fn set_default_precision(bits: u32) {
    DEFAULT_PREC.store(bits.clamp(24, 128), AtomicOrdering::Relaxed);
}

/// Default dynamic-range budget for exp: results whose binary exponent needs
/// more than this many bits saturate to an explicit huge/tiny bound.
pub const DEFAULT_EXP_BUDGET_BITS: u64 = 1 << 16;

/// Outcome of an exponential evaluation.
#[derive(Clone, Debug)]
pub enum ExpOutcome {
    /// Rigorous enclosure [lo, hi] of e^x.
    Enclosure(XReal, XReal),
    /// |x| too large for the budget: e^x >= 2^(2^budget). Enclosure [huge, +inf).
    SaturatedHigh(XReal),
    /// e^x <= 2^(-2^budget). Enclosure (0, tiny].
    SaturatedLow(XReal),
}

/// Extended-range real number.
#[derive(Clone, Debug)]
pub struct XReal {
    sign: i8,
    mant: u128,
    exp: BigInt,
    prec: u32,
}

// ---------------------------------------------------------------------------
// 256-bit helpers (hi, lo) representing hi*2^128 + lo.
// ---------------------------------------------------------------------------

fn u256_shr(hi: u128, lo: u128, k: u32) -> (u128, u128, bool) {
    if k == 0 {
        return (hi, lo, false);
    }
    if k >= 256 {
        return (0, 0, hi != 0 || lo != 0);
    }
    if k >= 128 {
        let k2 = k - 128;
        let sticky = lo != 0 || (k2 > 0 && hi & ((1u128 << k2) - 1) != 0);
        return (0, hi >> k2, sticky);
    }
    let sticky = lo & ((1u128 << k) - 1) != 0;
    let lo2 = (lo >> k) | (hi << (128 - k));
    (hi >> k, lo2, sticky)
}

fn u256_add(ah: u128, al: u128, bh: u128, bl: u128) -> (u128, u128, bool) {
    let (lo, c1) = al.overflowing_add(bl);
    let (hi, c2) = ah.overflowing_add(bh);
    let (hi, c3) = hi.overflowing_add(c1 as u128);
    (hi, lo, c2 || c3)
}

fn u256_sub(ah: u128, al: u128, bh: u128, bl: u128) -> (u128, u128) {
    let (lo, borrow) = al.overflowing_sub(bl);
    let hi = ah.wrapping_sub(bh).wrapping_sub(borrow as u128);
    (hi, lo)
}

fn mul_128(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = (1u128 << 64) - 1;
    let (a0, a1) = (a & MASK, a >> 64);
    let (b0, b1) = (b & MASK, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (mid << 64) | (p00 & MASK);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

impl XReal {
    // -- constructors -------------------------------------------------------

    pub fn zero() -> XReal {
        XReal { sign: 0, mant: 0, exp: BigInt::zero(), prec: default_precision() }
    }

    pub fn one(prec: u32) -> XReal {
        XReal { sign: 1, mant: 1u128 << 127, exp: BigInt::zero(), prec }
    }

    /// 2^k for an arbitrary-precision k.
    pub fn two_pow(k: BigInt, prec: u32) -> XReal {
        XReal { sign: 1, mant: 1u128 << 127, exp: k, prec }
    }

    /// Exact construction from sign/normalized mantissa/exponent plus guard
    /// and sticky bits, rounded to `prec` in direction `mode`.
    fn make(sign: i8, mant: u128, exp: BigInt, guard: bool, sticky: bool, prec: u32, mode: Round) -> XReal {
        debug_assert!(mant >> 127 == 1, "mantissa not normalized");
        debug_assert!((24..=128).contains(&prec));
        let drop = 128 - prec;
        let (kept, g, s) = if drop == 0 {
            (mant, guard, sticky)
        } else {
            let g2 = (mant >> (drop - 1)) & 1 == 1;
            let low = if drop >= 2 { mant & ((1u128 << (drop - 1)) - 1) != 0 } else { false };
            (mant >> drop, g2, low || guard || sticky)
        };
        let round_up = match mode {
            Round::Nearest => g && (s || kept & 1 == 1),
            Round::Floor => (g || s) && sign < 0,
            Round::Ceil => (g || s) && sign > 0,
        };
        let (kept, exp) = if round_up {
            let max_kept = if prec == 128 { u128::MAX } else { (1u128 << prec) - 1 };
            if kept == max_kept {
                (1u128 << (prec - 1), exp + 1)
            } else {
                (kept + 1, exp)
            }
        } else {
            (kept, exp)
        };
        XReal { sign, mant: kept << drop, exp, prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> XReal {
        XReal::from_bigint(&BigInt::from(v), prec, Round::Nearest)
    }

    pub fn from_u64(v: u64, prec: u32) -> XReal {
        XReal::from_bigint(&BigInt::from(v), prec, Round::Nearest)
    }

    pub fn from_bigint(v: &BigInt, prec: u32, mode: Round) -> XReal {
        XReal::from_fix(v, 0, &BigInt::zero(), prec, mode)
    }

    pub fn from_f64(v: f64, prec: u32) -> Result<XReal, XError> {
        if !v.is_finite() {
            return Err(XError::Domain("from_f64 of non-finite value".into()));
        }
        if v == 0.0 {
            return Ok(XReal::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i8 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074i64) // subnormal
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        // value = m * 2^e with m <= 2^53.
        let v = BigInt::from(m) << 0usize;
        let mut x = XReal::from_fix(&(if sign < 0 { -v } else { v }), 0, &BigInt::zero(), prec, Round::Nearest);
        x.exp += e;
        Ok(x)
    }

    /// Best-effort conversion for display and diagnostics.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let e = match self.exp.to_i64() {
            Some(e) if (-1060..=1020).contains(&e) => e,
            Some(e) if e > 1020 => return if self.sign > 0 { f64::INFINITY } else { f64::NEG_INFINITY },
            Some(_) => return 0.0 * self.sign as f64,
            None => {
                return if self.exp.is_negative() {
                    0.0 * self.sign as f64
                } else if self.sign > 0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
        };
        let top = (self.mant >> 74) as f64; // 54 bits
        self.sign as f64 * top * 2f64.powi(e as i32 - 53)
    }

    // -- accessors ----------------------------------------------------------

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// floor(log2 |x|) for x != 0.
    pub fn exponent(&self) -> &BigInt {
        &self.exp
    }

    /// One unit in the last place of this value (positive).
    pub fn ulp(&self) -> XReal {
        if self.sign == 0 {
            return XReal::zero();
        }
        XReal::two_pow(&self.exp - (self.prec as i64 - 1), self.prec)
    }

    pub fn abs(&self) -> XReal {
        let mut r = self.clone();
        if r.sign < 0 {
            r.sign = 1;
        }
        r
    }

    pub fn neg(&self) -> XReal {
        let mut r = self.clone();
        r.sign = -r.sign;
        r
    }

    pub fn with_prec(&self, prec: u32, mode: Round) -> XReal {
        if self.sign == 0 {
            return XReal::zero();
        }
        XReal::make(self.sign, self.mant, self.exp.clone(), false, false, prec, mode)
    }

    /// Multiply by 2^k (exact).
    pub fn mul_pow2(&self, k: i64) -> XReal {
        if self.sign == 0 {
            return XReal::zero();
        }
        let mut r = self.clone();
        r.exp += k;
        r
    }

    /// Multiply by 2^k for an arbitrary-precision k (exact).
    pub fn mul_exp2(&self, k: &BigInt) -> XReal {
        if self.sign == 0 {
            return XReal::zero();
        }
        let mut r = self.clone();
        r.exp += k;
        r
    }

    /// Raw mantissa bits (normalized, top bit set) for exact serialization.
    pub fn mantissa_u128(&self) -> u128 {
        self.mant
    }

    pub(crate) fn mantissa_bigint(&self) -> BigInt {
        BigInt::from(self.mant)
    }

    /// Rebuild from serialized parts. The mantissa must be normalized and
    /// must not carry more significant bits than `prec`.
    pub fn from_parts(sign: i8, mant: u128, exp: BigInt, prec: u32) -> Result<XReal, XError> {
        if sign == 0 {
            return Ok(XReal::zero());
        }
        if mant >> 127 != 1 {
            return Err(XError::Parse("denormalized mantissa".into()));
        }
        let prec = prec.clamp(24, 128);
        if prec < 128 && mant & ((1u128 << (128 - prec)) - 1) != 0 {
            return Err(XError::Parse("mantissa wider than precision".into()));
        }
        Ok(XReal { sign: if sign < 0 { -1 } else { 1 }, mant, exp, prec })
    }

    // -- comparison ---------------------------------------------------------

    pub fn cmp_value(&self, other: &XReal) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {}
            ord => return ord,
        }
        if self.sign == 0 {
            return Ordering::Equal;
        }
        let mag = match self.exp.cmp(&other.exp) {
            Ordering::Equal => self.mant.cmp(&other.mant),
            ord => ord,
        };
        if self.sign > 0 {
            mag
        } else {
            mag.reverse()
        }
    }

    // -- arithmetic ---------------------------------------------------------

    pub fn add_rm(&self, other: &XReal, prec: u32, mode: Round) -> XReal {
        if self.sign == 0 {
            return other.with_prec(prec, mode);
        }
        if other.sign == 0 {
            return self.with_prec(prec, mode);
        }
        // Order by exponent so `big` has the larger (or equal) exponent.
        let (big, small) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let d = &big.exp - &small.exp;
        let same_sign = big.sign == small.sign;

        let (sh, sl, ss) = if d > BigInt::from(300) {
            (0u128, 0u128, true)
        } else {
            let k = d.to_u32().expect("bounded shift");
            u256_shr(small.mant, 0, k)
        };

        if same_sign {
            let (mut hi, mut lo, carry) = u256_add(big.mant, 0, sh, sl);
            let mut exp = big.exp.clone();
            let mut sticky = ss;
            if carry {
                sticky |= lo & 1 == 1;
                lo = (lo >> 1) | (hi << 127);
                hi = (hi >> 1) | (1u128 << 127);
                exp += 1;
            }
            return XReal::normalize256(big.sign, hi, lo, sticky, exp, prec, mode);
        }

        // Magnitude subtraction: |big| >= |small| holds except when d == 0 and
        // mantissas are equal (then the result is zero; sticky cannot occur
        // at d == 0 because no shifting happened).
        if d.is_zero() && big.mant == small.mant {
            return XReal::zero();
        }
        let (bh, bl, sign, sh, sl) = if d.is_zero() && small.mant > big.mant {
            (small.mant, 0u128, small.sign, big.mant, 0u128)
        } else {
            (big.mant, 0u128, big.sign, sh, sl)
        };
        let (mut hi, mut lo) = u256_sub(bh, bl, sh, sl);
        let mut sticky = false;
        if ss {
            // The discarded tail of `small` makes the true result slightly
            // below (hi, lo): drop one unit at the bottom and mark sticky.
            if lo == 0 {
                hi = hi.wrapping_sub(1);
                lo = u128::MAX;
            } else {
                lo -= 1;
            }
            sticky = true;
        }
        XReal::normalize256(sign, hi, lo, sticky, big.exp.clone(), prec, mode)
    }

    /// Normalize a 256-bit magnitude whose value is (hi:lo) * 2^(exp-255),
    /// i.e. `exp` is correct when bit 255 is set.
    fn normalize256(sign: i8, hi: u128, lo: u128, sticky: bool, exp: BigInt, prec: u32, mode: Round) -> XReal {
        if hi == 0 && lo == 0 {
            debug_assert!(!sticky, "sticky residue with zero magnitude");
            return XReal::zero();
        }
        let msb = if hi != 0 { 255 - hi.leading_zeros() } else { 127 - lo.leading_zeros() };
        let shift = 255 - msb;
        let (hi, lo) = if shift == 0 {
            (hi, lo)
        } else if shift >= 128 {
            (lo << (shift - 128), 0)
        } else {
            ((hi << shift) | (lo >> (128 - shift)), lo << shift)
        };
        let guard = lo >> 127 == 1;
        let s = sticky || lo & ((1u128 << 127) - 1) != 0;
        XReal::make(sign, hi, exp - shift as i64, guard, s, prec, mode)
    }

    pub fn sub_rm(&self, other: &XReal, prec: u32, mode: Round) -> XReal {
        self.add_rm(&other.neg(), prec, mode)
    }

    pub fn mul_rm(&self, other: &XReal, prec: u32, mode: Round) -> XReal {
        if self.sign == 0 || other.sign == 0 {
            return XReal::zero();
        }
        let sign = self.sign * other.sign;
        let (hi, lo) = mul_128(self.mant, other.mant);
        // Product in [2^254, 2^256); value = (hi:lo) * 2^(ea + eb - 254).
        let exp = &self.exp + &other.exp + 1; // anchor for bit 255 set
        XReal::normalize256(sign, hi, lo, false, exp, prec, mode)
    }

    pub fn div_rm(&self, other: &XReal, prec: u32, mode: Round) -> Result<XReal, XError> {
        if other.sign == 0 {
            return Err(XError::DivisionByZero);
        }
        if self.sign == 0 {
            return Ok(XReal::zero());
        }
        let sign = self.sign * other.sign;
        let num = BigInt::from(self.mant) << 128usize;
        let den = BigInt::from(other.mant);
        let q = num.clone().div_floor(&den);
        let r = num - &q * &den;
        let sticky = !r.is_zero();
        // q in (2^127, 2^129).
        let qb = q.bits();
        debug_assert!(qb == 128 || qb == 129);
        let (mant, guard, exp_adj) = if qb == 129 {
            let m = (&q >> 1usize).to_u128().expect("fits");
            let g = (&q & BigInt::from(1)).to_u128().unwrap() == 1;
            (m, g, 0i64)
        } else {
            (q.to_u128().expect("fits"), false, -1i64)
        };
        let exp = &self.exp - &other.exp + exp_adj;
        Ok(XReal::make(sign, mant, exp, guard, sticky, prec, mode))
    }

    // -- fixed-point bridge -------------------------------------------------

    /// Value scaled by 2^scale as an integer. Requires the shift to be
    /// nonnegative (caller picks `scale >= 127 - exp`); panics otherwise.
    fn to_fix_exact(&self, scale: u64) -> BigInt {
        if self.sign == 0 {
            return BigInt::zero();
        }
        let shift: BigInt = &self.exp - 127 + BigInt::from(scale);
        let sh = shift.to_u64().expect("to_fix_exact: negative or huge shift");
        let v = BigInt::from(self.mant) << sh as usize;
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    /// Extract (mant, guard, sticky) from the top bits of a positive BigUint
    /// with bit length `b`, with `extra_sticky` OR-ed in.
    fn top_bits(mag: &num_bigint::BigUint, b: u64, extra_sticky: bool) -> (u128, bool, bool) {
        if b >= 128 {
            let m = (mag >> (b - 128) as usize).to_u128().expect("128 bits fit");
            let g = b >= 129 && mag.bit(b - 129);
            let s = extra_sticky
                || (b >= 130 && mag.trailing_zeros().map_or(false, |t| t < b - 129));
            (m, g, s)
        } else {
            (
                (mag.to_u128().expect("fits")) << (128 - b) as usize,
                false,
                extra_sticky,
            )
        }
    }

    /// Value scaled by 2^scale, floor-rounded (error below 1 ulp at `scale`).
    /// The exponent must fit in an i64 after offsetting; callers stay within
    /// moderate ranges.
    pub(crate) fn to_fix_floor(&self, scale: u64) -> BigInt {
        if self.sign == 0 {
            return BigInt::zero();
        }
        let shift: BigInt = &self.exp - 127 + BigInt::from(scale);
        let sh = shift.to_i64().expect("to_fix_floor: exponent out of range");
        let mag = BigInt::from(self.mant);
        let v: BigInt = if sh >= 0 { mag << sh as usize } else { mag >> (-sh) as usize };
        if self.sign < 0 {
            // Floor for negatives: round magnitude up if bits were lost.
            let lost = sh < 0 && {
                let back: BigInt = &v << (-sh) as usize;
                back != BigInt::from(self.mant)
            };
            if lost {
                -(v + 1i32)
            } else {
                -v
            }
        } else {
            v
        }
    }

    /// Build an XReal from a fixed-point value with a known error bound in
    /// ulps at `scale`. Directed modes shift by the error first, so the
    /// result is a true one-sided bound.
    pub(crate) fn from_fix(v: &BigInt, scale: u64, err_ulps: &BigInt, prec: u32, mode: Round) -> XReal {
        let adj = match mode {
            Round::Nearest => v.clone(),
            Round::Floor => v - err_ulps,
            Round::Ceil => v + err_ulps,
        };
        if adj.is_zero() {
            return XReal::zero();
        }
        let sign = if adj.is_negative() { -1i8 } else { 1 };
        let mag = adj.magnitude();
        let b = mag.bits();
        let exp = BigInt::from(b) - 1 - BigInt::from(scale);
        let (mant, guard, sticky) = XReal::top_bits(mag, b, false);
        XReal::make(sign, mant, exp, guard, sticky, prec, mode)
    }

    /// Nearest-rounded value of v / 2^scale (for oracles and diagnostics).
    pub fn from_fixed_point(v: &BigInt, scale: u64, prec: u32) -> XReal {
        XReal::from_fix(v, scale, &BigInt::zero(), prec, Round::Nearest)
    }

    /// Correctly-rounded construction from a ratio of integers (den != 0).
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, mode: Round) -> Result<XReal, XError> {
        if den.is_zero() {
            return Err(XError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(XReal::zero());
        }
        let sign: i8 = if num.is_negative() ^ den.is_negative() { -1 } else { 1 };
        let num_m = num.magnitude();
        let den_m = den.magnitude();
        let bn = num_m.bits() as i64;
        let bd = den_m.bits() as i64;
        let shift = (bd + 132 - bn).max(0) as u64;
        let shifted = num_m << shift as usize;
        let q = &shifted / den_m;
        let r = shifted - &q * den_m;
        let b = q.bits();
        let exp = BigInt::from(b) - 1 - BigInt::from(shift);
        let (mant, guard, sticky) = XReal::top_bits(&q, b, !r.is_zero());
        Ok(XReal::make(sign, mant, exp, guard, sticky, prec, mode))
    }

    // -- transcendental -----------------------------------------------------

    /// Natural logarithm with directed rounding. The relative error before
    /// rounding is below 2^(1-prec-32); directed modes give true bounds.
    pub fn ln_rm(&self, prec: u32, mode: Round) -> Result<XReal, XError> {
        if self.sign <= 0 {
            return Err(XError::Domain("ln of non-positive value".into()));
        }
        if self.mant == 1u128 << 127 && self.exp.is_zero() {
            return Ok(XReal::zero());
        }
        let near_one = self.exp.is_zero() || self.exp == BigInt::from(-1);
        if near_one {
            // Cancellation-aware scale: cover the leading zeros of x - 1.
            let diff = if self.exp.is_zero() {
                self.mant - (1u128 << 127)
            } else {
                (!self.mant).wrapping_add(1) // 2^128 - mant
            };
            let zc = diff.leading_zeros() as u64 + 1;
            let scale = (prec as u64 + zc + 64).max(130);
            let x = self.to_fix_exact(scale);
            let l = bigfix::ln_near_one(&x, scale);
            return Ok(XReal::from_fix(&l, scale, &BigInt::from(bigfix::KERNEL_ERR_ULPS), prec, mode));
        }
        let eb = self.exp.bits().max(1);
        let scale = (prec as u64 + eb + 64).max(130);
        let m = BigInt::from(self.mant) << (scale - 127) as usize;
        let lnm = bigfix::ln_near_one(&m, scale);
        let l = lnm + &self.exp * bigfix::ln2(scale);
        // err <= 4 (ln m) + |exp| * 4 (ln2) + 1 ulps at `scale`.
        let err = BigInt::from(bigfix::KERNEL_ERR_ULPS) * (self.exp.abs() + 2);
        Ok(XReal::from_fix(&l, scale, &err, prec, mode))
    }

    /// e^x as a rigorous enclosure, saturating outside the dynamic-range
    /// budget. Saturation is explicit in the returned variant.
    pub fn exp_bounds(&self, prec: u32, budget_bits: u64) -> ExpOutcome {
        if self.sign == 0 {
            return ExpOutcome::Enclosure(XReal::one(prec), XReal::one(prec));
        }
        // Saturation: the result exponent would need more than budget_bits bits.
        if self.exp >= BigInt::from(budget_bits) {
            let cap = BigInt::from(1) << budget_bits as usize;
            return if self.sign > 0 {
                ExpOutcome::SaturatedHigh(XReal::two_pow(cap, prec))
            } else {
                ExpOutcome::SaturatedLow(XReal::two_pow(-cap, prec))
            };
        }
        // Tiny |x|: e^x in [1+ x, 1 + x + x^2] for |x| <= 1/2.
        if self.exp <= BigInt::from(-(prec as i64) - 8) {
            let one = XReal::one(prec);
            let lo = one.add_rm(self, prec, Round::Floor);
            let x2 = self.mul_rm(self, prec, Round::Ceil);
            let hi = one.add_rm(self, prec, Round::Ceil).add_rm(&x2, prec, Round::Ceil);
            return ExpOutcome::Enclosure(lo, hi);
        }
        let e = self.exp.to_i64().expect("within budget");
        let scale = prec as u64 + 192 + e.unsigned_abs();
        let x = self.to_fix_exact(scale);
        let l2 = bigfix::ln2(scale);
        // Integer part of x / ln2, corrected so the remainder lies in [0, ln2).
        let mut i = (&x * bigfix::log2e(scale)) >> (2 * scale) as usize;
        let mut f = &x - &i * &l2;
        while f.is_negative() {
            i -= 1;
            f += &l2;
        }
        while f >= l2 {
            i += 1;
            f -= &l2;
        }
        // Work at a small scale for the series.
        let s2 = prec as u64 + 96;
        let ft = bigfix::shr_floor(&f, scale - s2);
        let m = bigfix::exp_frac(&ft, s2);
        // Error: series (<=4) + truncation of f (<=1 ulp at s2, amplified by
        // e^f <= 2) + I*ln2 rounding folded in via scale headroom.
        let err = BigInt::from(16);
        let mut lo = XReal::from_fix(&m, s2, &err, prec, Round::Floor);
        let mut hi = XReal::from_fix(&m, s2, &err, prec, Round::Ceil);
        if lo.sign > 0 {
            lo.exp += &i;
        }
        hi.exp += &i;
        ExpOutcome::Enclosure(lo, hi)
    }

    /// Square root with directed rounding.
    pub fn sqrt_rm(&self, prec: u32, mode: Round) -> Result<XReal, XError> {
        if self.sign < 0 {
            return Err(XError::Domain("sqrt of negative value".into()));
        }
        if self.sign == 0 {
            return Ok(XReal::zero());
        }
        let e: BigInt = &self.exp - 127;
        let (m, e) = if e.is_even() {
            (BigInt::from(self.mant), e)
        } else {
            (BigInt::from(self.mant) << 1usize, e - 1)
        };
        // value = m * 2^e, e even. sqrt = sqrt(m << 256) * 2^(e/2 - 128).
        let shifted = (m << 256usize).to_biguint().unwrap();
        let s = shifted.sqrt();
        let exact = &s * &s == shifted;
        let b = s.bits();
        let mant_exp = BigInt::from(b) - 1 + (e >> 1) - 128;
        let (mant, guard, sticky) = XReal::top_bits(&s, b, !exact);
        Ok(XReal::make(1, mant, mant_exp, guard, sticky, prec, mode))
    }
}

impl PartialEq for XReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}
impl Eq for XReal {}
impl PartialOrd for XReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}
impl Ord for XReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl std::ops::$trait<&XReal> for &XReal {
            type Output = XReal;
            fn $method(self, rhs: &XReal) -> XReal {
                let prec = self.prec.max(rhs.prec);
                self.$impl(rhs, prec, Round::Nearest)
            }
        }
    };
}
binop!(Add, add, add_rm);
binop!(Sub, sub, sub_rm);
binop!(Mul, mul, mul_rm);

impl std::ops::Div<&XReal> for &XReal {
    type Output = XReal;
    fn div(self, rhs: &XReal) -> XReal {
        let prec = self.prec.max(rhs.prec);
        self.div_rm(rhs, prec, Round::Nearest).expect("division by zero")
    }
}

impl std::ops::Neg for &XReal {
    type Output = XReal;
    fn neg(self) -> XReal {
        XReal::neg(self)
    }
}

impl std::fmt::Display for XReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        write!(f, "{}", crate::convert::to_decimal(self, digits))
    }
}
