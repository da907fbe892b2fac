//! Decimal and hexadecimal string conversions.
//!
//! Decimal form is "±d.ddd…e±EEE…" with an arbitrary-length exponent field.
//! At 17 significant digits a 53-bit value round-trips exactly. The "0x…p…"
//! hexadecimal form is bit-exact in both directions and is what structured
//! file formats use.

use crate::bigfix;
use crate::real::{Round, XReal};
use crate::XError;
use num_bigint::{BigInt, Sign, ToBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest binary exponent magnitude still handled by exact integer/rational
/// arithmetic; beyond it the logarithmic path takes over.
const EXACT_EXP_LIMIT: i64 = 8192;

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

/// Format with `sig` significant decimal digits (round to nearest).
pub fn to_decimal(x: &XReal, sig: usize) -> String {
    let sig = sig.max(1);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.sign() < 0;
    let (digits, d10) = if x.exponent().magnitude().bits() <= 13
        && x.exponent().to_i64().map_or(false, |e| e.abs() <= EXACT_EXP_LIMIT)
    {
        decimal_digits_exact(x, sig)
    } else {
        decimal_digits_log(x, sig)
    };
    let s = digits.to_string();
    debug_assert_eq!(s.len(), sig);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&s[..1]);
    if sig > 1 {
        out.push('.');
        out.push_str(&s[1..]);
    }
    out.push('e');
    if d10.sign() != Sign::Minus {
        out.push('+');
    }
    out.push_str(&d10.to_string());
    out
}

/// Exact route: value as a rational, correctly rounded digits.
fn decimal_digits_exact(x: &XReal, sig: usize) -> (BigInt, BigInt) {
    let e2 = x.exponent().to_i64().unwrap() - 127;
    let m = x.abs().mantissa_bigint();
    // value = m * 2^e2; estimate d10 then correct.
    let log10 = (x.exponent().to_i64().unwrap() as f64) * std::f64::consts::LOG10_2;
    let mut d10 = log10.floor() as i64 - 1;
    // Find the true d10 with 10^d10 <= value < 10^(d10+1).
    loop {
        if cmp_value_pow10(&m, e2, d10 + 1) != std::cmp::Ordering::Less {
            d10 += 1;
        } else if cmp_value_pow10(&m, e2, d10) == std::cmp::Ordering::Less {
            d10 -= 1;
        } else {
            break;
        }
    }
    // digits = round(value / 10^(d10 - sig + 1)), half to even.
    let k = d10 - sig as i64 + 1;
    let (mut num, mut den) = (m, BigInt::one());
    if e2 >= 0 {
        num <<= e2 as usize;
    } else {
        den <<= (-e2) as usize;
    }
    if k >= 0 {
        den *= BigInt::from(10u8).pow(k as u32);
    } else {
        num *= BigInt::from(10u8).pow((-k) as u32);
    }
    let q = &num / &den;
    let r = &num - &q * &den;
    let twice_r: BigInt = &r << 1usize;
    let round_up = match twice_r.cmp(&den) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => (&q % 2) == BigInt::one(),
        std::cmp::Ordering::Less => false,
    };
    let mut digits = if round_up { q + 1 } else { q };
    let ten_sig = BigInt::from(10u8).pow(sig as u32);
    if digits >= ten_sig {
        digits /= 10;
        return (digits, BigInt::from(d10 + 1));
    }
    (digits, BigInt::from(d10))
}

fn cmp_value_pow10(m: &BigInt, e2: i64, p: i64) -> std::cmp::Ordering {
    // Compare m * 2^e2 against 10^p without negative exponents.
    let (mut lhs, mut rhs) = (m.clone(), BigInt::one());
    if e2 >= 0 {
        lhs <<= e2 as usize;
    } else {
        rhs <<= (-e2) as usize;
    }
    if p >= 0 {
        rhs *= BigInt::from(10u8).pow(p as u32);
    } else {
        lhs *= BigInt::from(10u8).pow((-p) as u32);
    }
    lhs.cmp(&rhs)
}

/// Logarithmic route for huge exponents; Ziv-style retry on digit-boundary
/// ambiguity. Ties are impossible here: a value with |exponent| beyond the
/// exact-path limit cannot be a half-integer multiple of a power of ten.
fn decimal_digits_log(x: &XReal, sig: usize) -> (BigInt, BigInt) {
    let eb = x.exponent().magnitude().bits();
    let mut scale = 4 * sig as u64 + 96 + eb;
    for _ in 0..6 {
        let m = x.abs().mantissa_bigint() << (scale - 127) as usize;
        let (lnm, lnm_err) = bigfix::ln_fix(&m, scale);
        let t = lnm + x.exponent() * bigfix::ln2(scale);
        let terr = lnm_err + x.exponent().magnitude().to_bigint().unwrap() * bigfix::KERNEL_ERR_ULPS + 1;
        // y = t / ln10 = log10 |x|
        let y = bigfix::div_fix(&t, &bigfix::ln10(scale), scale);
        let yerr: BigInt = &terr + (&y.magnitude().to_bigint().unwrap() >> scale as usize) * bigfix::KERNEL_ERR_ULPS + 2;
        let one_s = BigInt::one() << scale as usize;
        let i10 = y.div_floor(&one_s);
        let frac = &y - &i10 * &one_s;
        // g = 10^frac in [1, 10)
        let u = bigfix::mul_fix(&frac, &bigfix::ln10(scale), scale);
        let g = bigfix::exp_frac(&u, scale);
        let gerr: BigInt = (&yerr * &BigInt::from(4u8)) + 16; // d(10^f)/df <= 10 ln10 < 24
        let p = &g * BigInt::from(10u8).pow(sig as u32 - 1);
        let perr = &gerr * BigInt::from(10u8).pow(sig as u32 - 1);
        // digits = round(p / 2^scale); check the ambiguity window.
        let lo = (&p - &perr + (&one_s >> 1usize)).div_floor(&one_s);
        let hi = (&p + &perr + (&one_s >> 1usize)).div_floor(&one_s);
        if lo == hi {
            let mut digits = lo;
            let ten_sig = BigInt::from(10u8).pow(sig as u32);
            let ten_sig_m1 = BigInt::from(10u8).pow(sig as u32 - 1);
            if digits >= ten_sig {
                digits /= 10;
                return (digits, i10 + 1);
            }
            if digits < ten_sig_m1 {
                // 10^frac rounded just below 1.0 at this width.
                digits = ten_sig - 1;
                return (digits, i10 - 1);
            }
            return (digits, i10);
        }
        scale += 128;
    }
    panic!("decimal conversion did not stabilize (tie-adjacent value)");
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parse "±d[.ddd][e±EEE]" with an arbitrary-length exponent, rounded to
/// `prec` bits in direction `mode`.
pub fn parse_decimal(s: &str, prec: u32, mode: Round) -> Result<XReal, XError> {
    let t = s.trim();
    let bad = || XError::Parse(format!("invalid decimal literal {t:?}"));
    let (neg, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mant_part, exp_part) = match rest.find(['e', 'E']) {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };
    let (int_part, frac_part) = match mant_part.find('.') {
        Some(i) => (&mant_part[..i], &mant_part[i + 1..]),
        None => (mant_part, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: String = format!("{int_part}{frac_part}");
    let d: BigInt = digits.parse().map_err(|_| bad())?;
    let x: BigInt = match exp_part {
        Some(e) if !e.is_empty() => e.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::zero(),
    };
    let p = x - BigInt::from(frac_part.len() as u64);
    if d.is_zero() {
        return Ok(XReal::zero());
    }
    let signed_d = if neg { -d } else { d };
    if p.magnitude().bits() <= 13 && p.to_i64().map_or(false, |v| v.abs() <= EXACT_EXP_LIMIT) {
        let pi = p.to_i64().unwrap();
        if pi >= 0 {
            let v = signed_d * BigInt::from(10u8).pow(pi as u32);
            Ok(XReal::from_bigint(&v, prec, mode))
        } else {
            let den = BigInt::from(10u8).pow((-pi) as u32);
            XReal::from_ratio(&signed_d, &den, prec, mode)
        }
    } else {
        parse_decimal_log(&signed_d, &p, prec, mode)
    }
}

/// Logarithmic parse path for huge decimal exponents. Values here are never
/// exactly representable (5^|p| divides no 128-bit dyadic), so directed
/// rounding is sound with an error-widened fixed-point value, and nearest
/// rounding is stabilized with a Ziv loop.
fn parse_decimal_log(d: &BigInt, p: &BigInt, prec: u32, mode: Round) -> Result<XReal, XError> {
    let sign_neg = d.is_negative();
    let dm = d.magnitude().to_bigint().unwrap();
    let mut scale = prec as u64 + 128 + p.magnitude().bits();
    for _ in 0..6 {
        // y = log2(value) = (ln d + p ln 10) / ln 2
        let (lnd, lnd_err) = bigfix::ln_fix(&(&dm << scale as usize), scale);
        let t = lnd + p * bigfix::ln10(scale);
        let terr = lnd_err + p.magnitude().to_bigint().unwrap() * bigfix::KERNEL_ERR_ULPS + 1;
        let y = bigfix::mul_fix(&t, &bigfix::log2e(scale), scale);
        let yerr: BigInt = (&terr << 1usize) + (t.magnitude().to_bigint().unwrap() >> scale as usize) * bigfix::KERNEL_ERR_ULPS + 2;
        let one_s = BigInt::one() << scale as usize;
        let e2 = y.div_floor(&one_s);
        let frac = &y - &e2 * &one_s;
        let u = bigfix::mul_fix(&frac, &bigfix::ln2(scale), scale);
        let m = bigfix::exp_frac(&u, scale); // 2^frac in [1, 2)
        let merr: BigInt = (&yerr << 1usize) + 8;
        // Check the rounding window is unambiguous at target precision.
        let lo = XReal::from_fix(&(&m - &merr), scale, &BigInt::zero(), prec, mode);
        let hi = XReal::from_fix(&(&m + &merr), scale, &BigInt::zero(), prec, mode);
        if lo == hi {
            let mut r = lo;
            if sign_neg {
                r = r.neg();
            }
            return Ok(r.mul_exp2(&e2));
        }
        scale += 128;
    }
    Err(XError::Parse("decimal parse did not stabilize".into()))
}

// ---------------------------------------------------------------------------
// Hexadecimal exact form
// ---------------------------------------------------------------------------

/// Bit-exact "±0x1.<frac>p<exp>" form (exponent in decimal).
pub fn to_hex_exact(x: &XReal) -> String {
    if x.is_zero() {
        return "0x0p+0".to_string();
    }
    let mant = x.mantissa_u128();
    let frac = mant << 1; // drop the leading 1 bit
    let mut nibbles = String::new();
    for i in 0..32 {
        let nib = ((frac >> (124 - 4 * i)) & 0xf) as u32;
        nibbles.push(char::from_digit(nib, 16).unwrap());
    }
    let trimmed = nibbles.trim_end_matches('0');
    let frac_part = if trimmed.is_empty() { "0" } else { trimmed };
    let sign = if x.sign() < 0 { "-" } else { "" };
    let e = x.exponent();
    let esign = if e.sign() == Sign::Minus { "" } else { "+" };
    format!("{sign}0x1.{frac_part}p{esign}{e}")
}

/// Parse the exact hexadecimal form produced by [`to_hex_exact`].
pub fn parse_hex_exact(s: &str, prec: u32) -> Result<XReal, XError> {
    let t = s.trim();
    if t == "0x0p+0" {
        return Ok(XReal::zero());
    }
    let bad = || XError::Parse(format!("invalid hex literal {t:?}"));
    let (neg, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t),
    };
    let rest = rest.strip_prefix("0x1.").ok_or_else(bad)?;
    let pidx = rest.find('p').ok_or_else(bad)?;
    let (frac, exp_s) = (&rest[..pidx], &rest[pidx + 1..]);
    if frac.is_empty() || frac.len() > 32 {
        return Err(bad());
    }
    let mut mant: u128 = 1 << 127;
    for (i, c) in frac.chars().enumerate() {
        let nib = c.to_digit(16).ok_or_else(bad)? as u128;
        mant |= nib << (123 - 4 * i);
    }
    let exp: BigInt = exp_s.parse().map_err(|_| bad())?;
    let x = XReal::from_parts(if neg { -1 } else { 1 }, mant, exp, prec)?;
    Ok(x)
}
