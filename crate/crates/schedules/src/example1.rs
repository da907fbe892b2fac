//! The first construction: f(z) = z prod (1 - z/s_i^c)(1 - z/s_{i^2}) with
//! s_{n+1} = s_n^{n + isqrt(n)}, and the verified-annulus exponent tracks
//! alpha_n, beta_n.

use crate::SchedError;
use efun::{ProductSpec, TailInfo, ZeroTerm};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use xlog::{Round, XBound, XInterval, XReal};

#[derive(Clone, Debug)]
pub struct Example1Schedule {
    pub c: XReal,
    pub s1: XReal,
    pub n_max: u32,
    /// Start index of the track products (product conditions hold from here).
    pub n2: u32,
    /// coeff[n-1] = log_{s1} s_n, exact integers.
    pub coeffs: Vec<BigInt>,
    pub log_s1: XInterval,
    /// log s_n enclosures (index n-1).
    pub log_s: Vec<XInterval>,
    /// Dyadic track values used for the concrete verified annuli.
    pub alpha: Vec<XReal>,
    pub beta: Vec<XReal>,
    /// Track enclosures for the hypothesis checks.
    pub alpha_iv: Vec<XInterval>,
    pub beta_iv: Vec<XInterval>,
    /// Exact log10 s_n when s1 is a power of ten.
    pub log10_exact: Option<Vec<BigInt>>,
    prec: u32,
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

/// Smallest N2 with prod_{i>=N2}(1 - 2c/i^2) > c^{-1/16} and
/// prod(1 + 2c/i^2) < c^{1/16}, certified by one-sided sums.
fn find_n2(c: &XReal, prec: u32) -> Result<u32, SchedError> {
    let ln_c_lo = c.ln_rm(prec, Round::Floor).map_err(|e| SchedError::Domain(e.to_string()))?;
    let budget = ln_c_lo.mul_pow2(-4); // (1/16) ln c
    if budget.sign() <= 0 {
        return Err(SchedError::Domain("c must exceed 1".into()));
    }
    // Suffix sums of upper bounds of -ln(1 - 2c/i^2) and ln(1 + 2c/i^2) from
    // a far horizon M, plus the integral tail 3c/M.
    const M: u64 = 8192;
    let three_c_over_m = XInterval::point(c.clone())
        .scale_int(&BigInt::from(3))
        .scale_int(&BigInt::from(1))
        .div(&XInterval::point(XReal::from_u64(M, prec)))
        .map_err(|e| SchedError::Domain(e.to_string()))?;
    let tail_hi = three_c_over_m.hi_real().unwrap().clone();
    let one = XInterval::point(XReal::one(prec));
    let mut lo_hi_sum = tail_hi.clone(); // sum of -ln(1-x) uppers
    let mut hi_hi_sum = tail_hi; // sum of ln(1+x) uppers
    let mut best: Option<u32> = None;
    // Walk downward accumulating, then report the smallest admissible start.
    let mut stack: Vec<(u64, XReal, XReal)> = Vec::new();
    for i in (3..=M).rev() {
        let i2 = XReal::from_u64(i * i, prec);
        let x = XInterval::point(c.clone())
            .scale_int(&BigInt::from(2))
            .div(&XInterval::point(i2))
            .map_err(|e| SchedError::Domain(e.to_string()))?;
        // ln(1+x) upper
        let up = one.add(&x).ln().map_err(|e| SchedError::Domain(e.to_string()))?;
        let up_hi = up.hi_real().unwrap().clone();
        // -ln(1-x) upper: needs x < 1
        let omx = one.sub(&x);
        if omx.lo_real().map_or(true, |v| v.sign() <= 0) {
            // 2c/i^2 >= 1: this index cannot start the product.
            stack.clear();
            lo_hi_sum = XReal::from_u64(u64::MAX, prec); // poison
            continue;
        }
        let dn = omx.ln().map_err(|e| SchedError::Domain(e.to_string()))?;
        let dn_hi = dn.lo_real().unwrap().neg(); // upper bound of -ln(1-x)
        lo_hi_sum = lo_hi_sum.add_rm(&dn_hi, prec, Round::Ceil);
        hi_hi_sum = hi_hi_sum.add_rm(&up_hi, prec, Round::Ceil);
        stack.push((i, lo_hi_sum.clone(), hi_hi_sum.clone()));
    }
    for (i, s_minus, s_plus) in stack.into_iter().rev() {
        if s_minus < budget && s_plus < budget {
            best = Some(i as u32);
            break;
        }
    }
    best.ok_or_else(|| SchedError::Domain("no admissible N2 below horizon".into()))
}

pub fn generate_example1(
    s1: &XReal,
    c: &XReal,
    n_max: u32,
    prec: u32,
) -> Result<Example1Schedule, SchedError> {
    if s1 <= &XReal::one(prec) {
        return Err(SchedError::BadParameter("s1 must exceed 1".into()));
    }
    if c <= &XReal::one(prec) {
        return Err(SchedError::BadParameter("c must exceed 1".into()));
    }
    if n_max < 3 {
        return Err(SchedError::BadParameter("n_max too small".into()));
    }
    let n2 = find_n2(c, prec)?;
    let mut coeffs = vec![BigInt::from(1)];
    for j in 1..n_max as u64 {
        let next = coeffs.last().unwrap() * BigInt::from(j + isqrt(j));
        coeffs.push(next);
    }
    let log_s1 = XInterval::finite(
        s1.ln_rm(prec, Round::Floor).map_err(|e| SchedError::Domain(e.to_string()))?,
        s1.ln_rm(prec, Round::Ceil).map_err(|e| SchedError::Domain(e.to_string()))?,
    );
    let log_s: Vec<XInterval> = coeffs.iter().map(|k| log_s1.scale_int(k)).collect();

    // Track recursions: alpha_n = c^{1/4} prod_{i=n2}^{n-1} (1 - 2c/i^2)
    //                            * prod_{i=n2}^{isqrt(n)} (1 - 2/i^2),
    // beta_n the (1 + .) analogue seeded at c^{3/4}.
    let ln_c = XInterval::finite(
        c.ln_rm(prec, Round::Floor).map_err(|e| SchedError::Domain(e.to_string()))?,
        c.ln_rm(prec, Round::Ceil).map_err(|e| SchedError::Domain(e.to_string()))?,
    );
    let c_pow = |num: i64, den: i64| -> Result<XInterval, SchedError> {
        let f = XInterval::point(
            XReal::from_i64(num, prec)
                .div_rm(&XReal::from_i64(den, prec), prec, Round::Nearest)
                .map_err(|e| SchedError::Domain(e.to_string()))?,
        );
        let (v, _) = ln_c.mul(&f).exp(1 << 16);
        Ok(v)
    };
    let one = XInterval::point(XReal::one(prec));
    let factor = |i: u64, two_c: bool| -> Result<XInterval, SchedError> {
        let num = if two_c {
            XInterval::point(c.clone()).scale_int(&BigInt::from(2))
        } else {
            XInterval::point(XReal::from_u64(2, prec))
        };
        let x = num
            .div(&XInterval::point(XReal::from_u64(i * i, prec)))
            .map_err(|e| SchedError::Domain(e.to_string()))?;
        Ok(x)
    };
    let mut alpha_iv = Vec::with_capacity(n_max as usize);
    let mut beta_iv = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max as u64 {
        let mut a = c_pow(1, 4)?;
        let mut b = c_pow(3, 4)?;
        for i in n2 as u64..n {
            let x = factor(i, true)?;
            a = a.mul(&one.sub(&x));
            b = b.mul(&one.add(&x));
        }
        let sq = isqrt(n);
        for i in n2 as u64..=sq {
            let x = factor(i, false)?;
            a = a.mul(&one.sub(&x));
            b = b.mul(&one.add(&x));
        }
        alpha_iv.push(a);
        beta_iv.push(b);
    }
    let alpha: Vec<XReal> = alpha_iv.iter().map(|iv| iv.midpoint().unwrap()).collect();
    let beta: Vec<XReal> = beta_iv.iter().map(|iv| iv.midpoint().unwrap()).collect();

    // Exact log10 exponents when s1 is a positive power of ten.
    let log10_exact = power_of_ten_exponent(s1).map(|k| {
        coeffs.iter().map(|cf| cf * &k).collect::<Vec<BigInt>>()
    });

    Ok(Example1Schedule {
        c: c.clone(),
        s1: s1.clone(),
        n_max,
        n2,
        coeffs,
        log_s1,
        log_s,
        alpha,
        beta,
        alpha_iv,
        beta_iv,
        log10_exact,
        prec,
    })
}

/// If x = 10^k exactly for a positive integer k, return k.
pub(crate) fn power_of_ten_exponent(x: &XReal) -> Option<BigInt> {
    let mut k = BigInt::from(0);
    let mut v = XReal::one(x.precision().max(64));
    let ten = XReal::from_u64(10, x.precision().max(64));
    for _ in 0..512 {
        if &v == x {
            return if k > BigInt::from(0) { Some(k) } else { None };
        }
        if &v > x {
            return None;
        }
        v = v.mul_rm(&ten, 128, Round::Nearest);
        k += 1;
    }
    None
}

impl Example1Schedule {
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Lemma hypothesis verdicts: c^{1/8} <= alpha_n <= beta_n <= c^{7/8}.
    pub fn validate(&self) -> Vec<verdict::CheckVerdict> {
        let prec = self.prec;
        let ln_c = XInterval::finite(
            self.c.ln_rm(prec, Round::Floor).unwrap(),
            self.c.ln_rm(prec, Round::Ceil).unwrap(),
        );
        let pow = |num: i64, den: i64| {
            let f = XInterval::point(
                XReal::from_i64(num, prec)
                    .div_rm(&XReal::from_i64(den, prec), prec, Round::Nearest)
                    .unwrap(),
            );
            ln_c.mul(&f).exp(1 << 16).0
        };
        let lo_bound = pow(1, 8);
        let hi_bound = pow(7, 8);
        let mut out = Vec::new();
        for (i, (a, b)) in self.alpha_iv.iter().zip(&self.beta_iv).enumerate() {
            let n = i as i64 + 1;
            out.push(verdict::CheckVerdict::from_ge(
                "ex1",
                n,
                "track alpha_n >= c^(1/8)",
                a,
                &lo_bound,
            ));
            out.push(verdict::CheckVerdict::from_le("ex1", n, "track alpha_n <= beta_n", a, b));
            out.push(verdict::CheckVerdict::from_le(
                "ex1",
                n,
                "track beta_n <= c^(7/8)",
                b,
                &hi_bound,
            ));
        }
        out
    }

    /// All zero log-moduli (both families) with index bookkeeping, sorted.
    /// Returns (log_modulus_dyadic, family) with family 0 = s_i^c, 1 = s_{i^2}.
    fn zero_candidates(&self) -> Vec<(XReal, u8)> {
        let prec = self.prec;
        let mut out: Vec<(XReal, u8)> = Vec::new();
        for iv in &self.log_s {
            let mid = iv.midpoint().unwrap();
            let z = mid.mul_rm(&self.c, prec, Round::Nearest);
            out.push((z, 0));
        }
        let mut i = 1u64;
        while (i * i) as usize <= self.log_s.len() {
            let mid = self.log_s[(i * i - 1) as usize].midpoint().unwrap();
            out.push((mid, 1));
            i += 1;
        }
        out.sort_by(|x, y| x.0.cmp_value(&y.0));
        out
    }

    /// Build the truncated product for evaluation radii up to
    /// max_log_radius, keeping zeros below max * B (B = 16) and certifying
    /// the two per-family tails.
    pub fn product_spec(&self, max_log_radius: &XReal) -> Result<ProductSpec, SchedError> {
        let prec = self.prec;
        let ln_b = XReal::from_u64(16, prec).ln_rm(prec, Round::Ceil).unwrap();
        let keep_below = max_log_radius.add_rm(&ln_b, prec, Round::Ceil);
        let cands = self.zero_candidates();
        let mut zeros = Vec::new();
        let mut first_dropped: Option<XReal> = None;
        for (z, _fam) in &cands {
            if z <= &keep_below {
                zeros.push(ZeroTerm { log_modulus: z.clone(), multiplicity: 1 });
            } else {
                first_dropped = Some(z.clone());
                break;
            }
        }
        let first = first_dropped.ok_or(SchedError::ScheduleTooShort)?;
        let cutoff = first.sub_rm(&ln_b, prec, Round::Floor);
        Ok(ProductSpec::truncated(
            1,
            zeros,
            TailInfo {
                first_dropped_log: first,
                log_cutoff: cutoff,
                // Two interleaved zero families: each doubles on its own, so
                // the dropped sum is at most twice the doubling bound.
                branches: 2,
            },
        ))
    }

    /// log s_n as an enclosure (1-based n).
    pub fn log_s_iv(&self, n: u32) -> &XInterval {
        &self.log_s[(n - 1) as usize]
    }

    /// CSV export: n, exponent coefficient, log10 s_n, alpha_n, beta_n.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,log_s1_coeff,log10_s_n,alpha_n,beta_n\n");
        let prec = self.prec;
        let ln10 = xlog::consts::ln10(prec, Round::Nearest);
        for i in 0..self.coeffs.len() {
            let log10 = match &self.log10_exact {
                Some(v) => v[i].to_string(),
                None => {
                    let mid = self.log_s[i].midpoint().unwrap();
                    let v = mid.div_rm(&ln10, prec, Round::Nearest).unwrap();
                    xlog::convert::to_decimal(&v, 17)
                }
            };
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                i + 1,
                self.coeffs[i],
                log10,
                xlog::convert::to_decimal(&self.alpha[i], 17),
                xlog::convert::to_decimal(&self.beta[i], 17),
            ));
        }
        out
    }

    /// Nearest zero log-modulus at or below x among the dyadic zeros.
    pub fn nearest_zero_below(&self, x: &XReal) -> Option<XReal> {
        self.zero_candidates()
            .into_iter()
            .rev()
            .map(|(z, _)| z)
            .find(|z| z <= x)
    }

    pub fn nearest_zero_above(&self, x: &XReal) -> Option<XReal> {
        self.zero_candidates().into_iter().map(|(z, _)| z).find(|z| z >= x)
    }

    /// True when n is a perfect square (the (sq) branch of the lemma).
    pub fn is_square_index(n: u32) -> bool {
        let r = isqrt(n as u64);
        r * r == n as u64
    }

    /// The track exponent (1 +- 2c/n^2) or (1 +- 2/n) per the lemma branch.
    pub fn lemma_slack(&self, n: u32, upper: bool) -> XInterval {
        let prec = self.prec;
        let one = XInterval::point(XReal::one(prec));
        let x = if Self::is_square_index(n) {
            XInterval::point(XReal::from_u64(2, prec))
                .div(&XInterval::point(XReal::from_u64(n as u64, prec)))
                .unwrap()
        } else {
            XInterval::point(self.c.clone())
                .scale_int(&BigInt::from(2))
                .div(&XInterval::point(XReal::from_u64(n as u64 * n as u64, prec)))
                .unwrap()
        };
        if upper {
            one.add(&x)
        } else {
            one.sub(&x)
        }
    }
}

/// Convenience for tests and defaults: parse decimal parameters.
pub fn example1_from_decimal(
    s1: &str,
    c: &str,
    n_max: u32,
    prec: u32,
) -> Result<Example1Schedule, SchedError> {
    let s1 = xlog::convert::parse_decimal(s1, prec, Round::Nearest)
        .map_err(|e| SchedError::BadParameter(e.to_string()))?;
    let c = xlog::convert::parse_decimal(c, prec, Round::Nearest)
        .map_err(|e| SchedError::BadParameter(e.to_string()))?;
    generate_example1(&s1, &c, n_max, prec)
}
