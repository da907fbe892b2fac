//! Directed-rounding evaluations of log(1 + e^L) and log|1 - e^L|.
//!
//! These two maps turn a log-magnitude L = log|w| into the log of |1 +- w|
//! bounds from the triangle inequality, and are the building blocks for all
//! product-modulus arithmetic. Each is exact to within ~2 ulps across its
//! branch boundaries.

use crate::bigfix;
use crate::real::{ExpOutcome, Round, XReal};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

const KERNEL_BUDGET: u64 = 1 << 16;

/// Threshold exponent above which e^{-|L|} is far below one ulp of |L| for
/// any supported precision (see the range checks in the callers).
const FAR_EXP: i64 = 8;

/// Threshold exponent below which |L| is treated as a perturbation of 0.
const SMALL_EXP: i64 = -32;

fn exp_class(l: &XReal) -> i64 {
    // Clamp the exponent into a small classification range.
    match l.exponent().to_i64() {
        Some(e) => e.clamp(-1 << 20, 1 << 20),
        None => {
            if l.exponent().is_negative() {
                -(1 << 20)
            } else {
                1 << 20
            }
        }
    }
}

/// e^L at fixed-point `scale` for exponent class in (SMALL_EXP, FAR_EXP).
/// Returns (value, error bound in ulps at scale).
fn exp_fix_moderate(l: &XReal, scale: u64) -> (BigInt, BigInt) {
    let l2 = bigfix::ln2(scale);
    // |L| < 2^FAR_EXP so the fixed-point form is small.
    let lf = l.to_fix_floor(scale);
    let mut i: i64 = 0;
    let mut f = lf.clone();
    // Reduce f into [0, ln2).
    while f.is_negative() {
        f += &l2;
        i -= 1;
    }
    while f >= l2 {
        f -= &l2;
        i += 1;
    }
    let m = bigfix::exp_frac(&f, scale);
    let (v, err) = if i >= 0 {
        (m << i as usize, BigInt::from(bigfix::KERNEL_ERR_ULPS + 2) << i as usize)
    } else {
        (m >> (-i) as usize, BigInt::from(bigfix::KERNEL_ERR_ULPS + 3))
    };
    (v, err)
}

/// log(1 + e^L), directed.
pub fn log1p_exp(l: &XReal, prec: u32, mode: Round) -> XReal {
    if l.is_zero() {
        return crate::consts::ln2(prec, mode);
    }
    let e = exp_class(l);
    if l.sign() > 0 && e >= FAR_EXP {
        // Correction e^{-L} is far below one ulp of L.
        return match mode {
            Round::Floor | Round::Nearest => l.with_prec(prec, Round::Floor),
            Round::Ceil => l.with_prec(prec, Round::Ceil).add_rm(&l.ulp(), prec, Round::Ceil),
        };
    }
    if l.sign() < 0 && e >= FAR_EXP {
        // e^L tiny: log(1+e^L) in [e^L (1 - e^L), e^L].
        let (lo, hi) = match l.exp_bounds(prec, KERNEL_BUDGET) {
            ExpOutcome::Enclosure(lo, hi) => (lo, hi),
            ExpOutcome::SaturatedLow(t) => (XReal::zero(), t),
            ExpOutcome::SaturatedHigh(_) => unreachable!("negative argument"),
        };
        return match mode {
            Round::Floor => {
                let f = XReal::one(prec).sub_rm(&lo, prec, Round::Floor);
                lo.mul_rm(&f, prec, Round::Floor)
            }
            Round::Ceil | Round::Nearest => hi,
        };
    }
    if e <= SMALL_EXP {
        // log(1+e^L) = ln2 + L/2 + O(L^2); enclose with a +-L^2 slack.
        let ln2 = crate::consts::ln2(prec, mode);
        let half_l = l.mul_pow2(-1);
        let l2 = l.mul_rm(l, prec, Round::Ceil);
        return match mode {
            Round::Floor => ln2.add_rm(&half_l, prec, Round::Floor).sub_rm(&l2, prec, Round::Floor),
            Round::Ceil => ln2.add_rm(&half_l, prec, Round::Ceil).add_rm(&l2, prec, Round::Ceil),
            Round::Nearest => ln2.add_rm(&half_l, prec, Round::Nearest),
        };
    }
    // Moderate range: one fixed-point pipeline, one rounding.
    let scale = prec as u64 + 96;
    let (t, terr) = exp_fix_moderate(l, scale);
    let u = (BigInt::from(1) << scale as usize) + &t;
    let (v, verr) = bigfix::ln_fix(&u, scale);
    // Propagate the error of u through d ln(u)/du = 1/u.
    let uerr = (&terr << scale as usize) / &u + 1;
    let err = verr + uerr + 2;
    let r = XReal::from_fix(&v, scale, &err, prec, mode);
    if r.sign() < 0 {
        // log(1 + e^L) is positive; the widened lower bound may cross zero
        // when e^L vanishes at this scale.
        return XReal::zero();
    }
    r
}

/// log|1 - e^L| for L != 0, directed.
pub fn log_abs_one_minus_exp(l: &XReal, prec: u32, mode: Round) -> XReal {
    assert!(!l.is_zero(), "log|1 - e^L| diverges at L = 0");
    let e = exp_class(l);
    if l.sign() > 0 && e >= FAR_EXP {
        // ln(e^L - 1) = L + ln(1 - e^{-L}); correction below one ulp.
        return match mode {
            Round::Ceil | Round::Nearest => l.with_prec(prec, Round::Ceil),
            Round::Floor => l.with_prec(prec, Round::Floor).sub_rm(&l.ulp(), prec, Round::Floor),
        };
    }
    if l.sign() < 0 && e >= FAR_EXP {
        // ln(1 - e^L) in [-e^L (1 + e^L), -e^L].
        let (lo, hi) = match l.exp_bounds(prec, KERNEL_BUDGET) {
            ExpOutcome::Enclosure(lo, hi) => (lo, hi),
            ExpOutcome::SaturatedLow(t) => (XReal::zero(), t),
            _ => unreachable!("negative argument"),
        };
        return match mode {
            Round::Floor => {
                let one = XReal::one(prec);
                let f = one.add_rm(&hi, prec, Round::Ceil);
                hi.mul_rm(&f, prec, Round::Ceil).neg()
            }
            Round::Ceil => lo.neg(),
            Round::Nearest => hi.neg(),
        };
    }
    if e <= SMALL_EXP {
        // |1 - e^L| = |L| * (1 + O(L)); log = log|L| + log(1 + O(L)).
        let abs_l = l.abs();
        let log_abs = match mode {
            Round::Floor => abs_l.ln_rm(prec, Round::Floor).expect("positive"),
            _ => abs_l.ln_rm(prec, mode).expect("positive"),
        };
        let slack = abs_l.mul_pow2(1); // |log(1 +- |L|)| <= 2|L|
        return match mode {
            Round::Floor => log_abs.sub_rm(&slack, prec, Round::Floor),
            Round::Ceil => log_abs.add_rm(&slack, prec, Round::Ceil),
            Round::Nearest => log_abs,
        };
    }
    let scale = prec as u64 + 96;
    let (t, terr) = exp_fix_moderate(l, scale);
    let one = BigInt::from(1) << scale as usize;
    let u = (&one - &t).abs();
    if u.is_zero() {
        // e^L rounded exactly to 1 at this scale; |1 - e^L| <= terr ulps.
        // Only reachable for |L| ~ 2^-scale, which SMALL_EXP already caught.
        unreachable!("moderate branch with vanishing 1 - e^L");
    }
    let (v, verr) = bigfix::ln_fix(&u, scale);
    // Propagate the error of u through d ln(u)/du = 1/u.
    let uerr = (&terr << scale as usize) / &u + 1;
    let err = verr + uerr + 2;
    XReal::from_fix(&v, scale, &err, prec, mode)
}
